use std::collections::HashMap;

use super::types::{validate_system, Component, EdgeKind, GadgetSystem};
use super::SystemError;
use crate::model::{AgentState, Config, Construction, GadgetMachine, PortFraming, PortSpec};
use crate::push1::{BlockSet, GridSite, Push1Grid};

/// State of one instance inside a composite.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PartState {
    Gadget(u32),
    Grid(BlockSet),
    System(Vec<PartState>),
}

/// Where the agent is inside one instance.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PartSite {
    Gadget(u32),
    Grid(GridSite),
    System(Box<SystemSite>),
}

/// Which instance the agent is in, and where inside it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SystemSite {
    pub part: u32,
    pub site: PartSite,
}

type PartConfig = Config<PartState, PartSite>;

#[derive(Clone, Debug)]
enum Part {
    Gadget(GadgetMachine),
    Grid(Push1Grid),
    System(Composite),
}

impl Part {
    fn start(&self) -> PartState {
        match self {
            Part::Gadget(m) => PartState::Gadget(m.start()),
            Part::Grid(g) => PartState::Grid(g.start()),
            Part::System(c) => PartState::System(c.start()),
        }
    }

    fn ports(&self) -> Vec<PortSpec> {
        match self {
            Part::Gadget(m) => m.ports(),
            Part::Grid(g) => g.ports(),
            Part::System(c) => c.ports(),
        }
    }

    fn successors(&self, cfg: &PartConfig) -> Vec<PartConfig> {
        let agent = cfg.agent;
        match (self, &cfg.state, &cfg.site) {
            (Part::Gadget(m), PartState::Gadget(q), PartSite::Gadget(l)) => m
                .successors(&Config::new(*q, *l, agent))
                .into_iter()
                .map(|c| {
                    Config::new(
                        PartState::Gadget(c.state),
                        PartSite::Gadget(c.site),
                        c.agent,
                    )
                })
                .collect(),
            (Part::Grid(g), PartState::Grid(b), PartSite::Grid(s)) => g
                .successors(&Config::new(b.clone(), *s, agent))
                .into_iter()
                .map(|c| Config::new(PartState::Grid(c.state), PartSite::Grid(c.site), c.agent))
                .collect(),
            (Part::System(sys), PartState::System(v), PartSite::System(s)) => sys
                .successors(&Config::new(v.clone(), (**s).clone(), agent))
                .into_iter()
                .map(|c| {
                    Config::new(
                        PartState::System(c.state),
                        PartSite::System(Box::new(c.site)),
                        c.agent,
                    )
                })
                .collect(),
            _ => unreachable!("part state does not match its component"),
        }
    }

    fn observe(&self, cfg: &PartConfig) -> Option<PortFraming> {
        let agent = cfg.agent;
        match (self, &cfg.state, &cfg.site) {
            (Part::Gadget(m), PartState::Gadget(q), PartSite::Gadget(l)) => {
                m.observe(&Config::new(*q, *l, agent))
            }
            (Part::Grid(g), PartState::Grid(b), PartSite::Grid(s)) => {
                g.observe(&Config::new(b.clone(), *s, agent))
            }
            (Part::System(sys), PartState::System(v), PartSite::System(s)) => {
                sys.observe(&Config::new(v.clone(), (**s).clone(), agent))
            }
            _ => unreachable!("part state does not match its component"),
        }
    }

    fn enter(&self, state: &PartState, at: PortFraming) -> Option<PartConfig> {
        match (self, state) {
            (Part::Gadget(m), PartState::Gadget(q)) => m.enter(q, at).map(|c| {
                Config::new(
                    PartState::Gadget(c.state),
                    PartSite::Gadget(c.site),
                    c.agent,
                )
            }),
            (Part::Grid(g), PartState::Grid(b)) => g
                .enter(b, at)
                .map(|c| Config::new(PartState::Grid(c.state), PartSite::Grid(c.site), c.agent)),
            (Part::System(sys), PartState::System(v)) => sys.enter(v, at).map(|c| {
                Config::new(
                    PartState::System(c.state),
                    PartSite::System(Box::new(c.site)),
                    c.agent,
                )
            }),
            _ => unreachable!("part state does not match its component"),
        }
    }

    fn describe(&self, state: &PartState) -> String {
        match (self, state) {
            (Part::Gadget(m), PartState::Gadget(q)) => m.describe_state(q),
            (Part::Grid(g), PartState::Grid(b)) => g.describe_state(b),
            (Part::System(sys), PartState::System(v)) => format!("{{{}}}", sys.describe_state(v)),
            _ => unreachable!("part state does not match its component"),
        }
    }
}

/// A validated system as a construction.
///
/// Its states are tuples of instance states; only reachable tuples are
/// ever built. The agent moves within one instance by that instance's own
/// rules, and between instances along edges, without changing any state.
/// An internal port (not exposed) is unobservable to the composite, so
/// edge crossings compress into the composite's interior just as grid
/// cells do.
#[derive(Clone, Debug)]
pub struct Composite {
    names: Vec<String>,
    parts: Vec<Part>,
    ports: Vec<PortSpec>,
    /// Composite port index to `(part, part port)`.
    exposed_from: Vec<(u32, usize)>,
    exposed_at: HashMap<(u32, usize), usize>,
    links: HashMap<(u32, usize), Vec<(u32, usize, EdgeKind)>>,
}

/// Builds the composite construction of a system.
pub fn compose(s: &GadgetSystem) -> Result<Composite, SystemError> {
    let diags = validate_system(s);
    if !diags.is_empty() {
        return Err(SystemError::Invalid(diags));
    }
    let mut parts = Vec::with_capacity(s.instances.len());
    for inst in &s.instances {
        parts.push(match &inst.component {
            Component::Gadget(g) => {
                Part::Gadget(g.machine().expect("validated gadget always has a machine"))
            }
            Component::Grid(g) => Part::Grid(g.clone()),
            Component::System(sub) => Part::System(compose(sub)?),
        });
    }
    let part_ix: HashMap<&str, u32> = s
        .instances
        .iter()
        .enumerate()
        .map(|(i, inst)| (inst.name.as_str(), i as u32))
        .collect();
    let part_ports: Vec<Vec<PortSpec>> = parts.iter().map(Part::ports).collect();
    let resolve = |e: &super::Endpoint| {
        let i = part_ix[e.instance.as_str()];
        let p = part_ports[i as usize]
            .iter()
            .position(|spec| spec.location == e.location)
            .expect("validated endpoint");
        (i, p)
    };

    let ports = s.port_specs();
    let mut exposed_from = vec![(0, 0); ports.len()];
    let mut exposed_at = HashMap::new();
    for x in &s.exposed {
        let k = ports
            .iter()
            .position(|p| p.location == x.label)
            .expect("validated exposure");
        let at = resolve(&x.endpoint);
        exposed_from[k] = at;
        exposed_at.insert(at, k);
    }
    let mut links: HashMap<(u32, usize), Vec<(u32, usize, EdgeKind)>> = HashMap::new();
    for e in &s.edges {
        let (a, b) = (resolve(&e.a), resolve(&e.b));
        links.entry(a).or_default().push((b.0, b.1, e.kind));
        links.entry(b).or_default().push((a.0, a.1, e.kind));
    }
    for v in links.values_mut() {
        v.sort();
        v.dedup();
    }
    Ok(Composite {
        names: s.instances.iter().map(|i| i.name.clone()).collect(),
        parts,
        ports,
        exposed_from,
        exposed_at,
        links,
    })
}

impl Composite {
    pub fn part_names(&self) -> &[String] {
        &self.names
    }

    fn lift(
        &self,
        state: &[PartState],
        part: u32,
        inner: PartConfig,
    ) -> Config<Vec<PartState>, SystemSite> {
        let mut next = state.to_vec();
        next[part as usize] = inner.state;
        Config::new(
            next,
            SystemSite {
                part,
                site: inner.site,
            },
            inner.agent,
        )
    }
}

impl Construction for Composite {
    type State = Vec<PartState>;
    type Site = SystemSite;

    fn start(&self) -> Vec<PartState> {
        self.parts.iter().map(Part::start).collect()
    }

    fn ports(&self) -> Vec<PortSpec> {
        self.ports.clone()
    }

    fn successors(
        &self,
        cfg: &Config<Vec<PartState>, SystemSite>,
    ) -> Vec<Config<Vec<PartState>, SystemSite>> {
        let i = cfg.site.part;
        let part = &self.parts[i as usize];
        let here = Config::new(
            cfg.state[i as usize].clone(),
            cfg.site.site.clone(),
            cfg.agent,
        );
        let mut out = Vec::new();

        for next in part.successors(&here) {
            let exit = part
                .observe(&next)
                .filter(|pf| pf.agent == AgentState::Push);
            let Some(pf) = exit else {
                out.push(self.lift(&cfg.state, i, next));
                continue;
            };
            // A block has just been pushed out through port `pf.port`. At an
            // exposed port the environment takes it, if allowed. At an
            // internal port it must be pushed straight into the port facing
            // it across a block edge; anywhere else it would vanish, so the
            // move is dropped.
            let key = (i, pf.port);
            if let Some(&k) = self.exposed_at.get(&key) {
                if self.ports[k].block_out {
                    out.push(self.lift(&cfg.state, i, next));
                }
                continue;
            }
            let lifted = self.lift(&cfg.state, i, next);
            for &(j, q, kind) in self.links.get(&key).into_iter().flatten() {
                if kind != EdgeKind::Block {
                    continue;
                }
                let partner = &self.parts[j as usize];
                let Some(entry) = partner.enter(
                    &lifted.state[j as usize],
                    PortFraming::new(q, AgentState::Push),
                ) else {
                    continue;
                };
                if !partner.successors(&entry).is_empty() {
                    out.push(self.lift(&lifted.state, j, entry));
                }
            }
        }

        // Walking along an edge: every instance keeps its state.
        if cfg.agent == AgentState::Step {
            if let Some(pf) = part.observe(&here) {
                for &(j, q, _) in self.links.get(&(i, pf.port)).into_iter().flatten() {
                    let partner = &self.parts[j as usize];
                    if let Some(entry) = partner.enter(
                        &cfg.state[j as usize],
                        PortFraming::new(q, AgentState::Step),
                    ) {
                        out.push(self.lift(&cfg.state, j, entry));
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    fn observe(&self, cfg: &Config<Vec<PartState>, SystemSite>) -> Option<PortFraming> {
        let i = cfg.site.part;
        let part = &self.parts[i as usize];
        let here = Config::new(
            cfg.state[i as usize].clone(),
            cfg.site.site.clone(),
            cfg.agent,
        );
        let pf = part.observe(&here)?;
        self.exposed_at
            .get(&(i, pf.port))
            .map(|&k| PortFraming::new(k, pf.agent))
    }

    fn enter(
        &self,
        state: &Vec<PartState>,
        at: PortFraming,
    ) -> Option<Config<Vec<PartState>, SystemSite>> {
        let spec = self.ports.get(at.port)?;
        if at.agent == AgentState::Push && !spec.block_in {
            return None;
        }
        let (i, p) = self.exposed_from[at.port];
        let inner =
            self.parts[i as usize].enter(&state[i as usize], PortFraming::new(p, at.agent))?;
        Some(self.lift(state, i, inner))
    }

    fn describe_state(&self, state: &Vec<PartState>) -> String {
        self.names
            .iter()
            .zip(&self.parts)
            .zip(state)
            .map(|((name, part), s)| format!("{name}={}", part.describe(s)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::equivalent;
    use crate::fixtures;
    use crate::model::Symbol;
    use crate::synthesis::{gadget_to_nfa, synthesize, ExploreOptions};
    use crate::systems::{Edge, Endpoint, Exposure, Instance};

    fn gadget(name: &str, g: crate::model::Gadget) -> Instance {
        Instance::new(name, Component::Gadget(g))
    }

    fn expose(inst: &str, loc: &str, label: &str) -> Exposure {
        Exposure::new(Endpoint::new(inst, loc), label)
    }

    #[test]
    fn single_instance_is_the_identity() {
        let door = fixtures::self_closing_door();
        let s = GadgetSystem {
            instances: vec![gadget("d", door.clone())],
            exposed: ["entrance", "exit", "keyhole"]
                .iter()
                .map(|l| expose("d", l, l))
                .collect(),
            ..Default::default()
        };
        let c = compose(&s).unwrap();
        let g = synthesize(&c, &ExploreOptions::default()).unwrap().gadget;
        assert!(equivalent(&gadget_to_nfa(&g), &gadget_to_nfa(&door)).is_equal());
    }

    #[test]
    fn two_dicrumblers_in_series_pass_once() {
        let s = GadgetSystem {
            instances: vec![
                gadget("d1", fixtures::dicrumbler()),
                gadget("d2", fixtures::dicrumbler()),
            ],
            edges: vec![Edge::new(
                Endpoint::new("d1", "B"),
                Endpoint::new("d2", "A"),
                EdgeKind::Free,
            )],
            exposed: vec![expose("d1", "A", "A"), expose("d2", "B", "B")],
            ..Default::default()
        };
        let g = synthesize(&compose(&s).unwrap(), &ExploreOptions::default())
            .unwrap()
            .gadget;
        let a = gadget_to_nfa(&g);
        let through = Symbol::walk("A", "B");
        assert!(a.accepts(&[through.clone()]));
        assert!(!a.accepts(&[through.clone(), through.clone()]));
        assert!(!a.accepts(&[Symbol::walk("B", "A")]));
        assert!(equivalent(&a, &gadget_to_nfa(&fixtures::dicrumbler())).is_equal());
    }

    #[test]
    fn edge_crossings_keep_every_state() {
        let s = GadgetSystem {
            instances: vec![
                gadget("d1", fixtures::dicrumbler()),
                gadget("w", fixtures::wire()),
            ],
            edges: vec![Edge::new(
                Endpoint::new("d1", "B"),
                Endpoint::new("w", "A"),
                EdgeKind::Free,
            )],
            exposed: vec![expose("d1", "A", "A"), expose("w", "B", "B")],
            ..Default::default()
        };
        let c = compose(&s).unwrap();
        let start = c.start();
        let at_b = c
            .enter(&start, PortFraming::new(0, AgentState::Step))
            .and_then(|cfg| {
                c.successors(&cfg)
                    .into_iter()
                    .find(|n| n.site.part == 0 && n.state != start)
            })
            .unwrap();
        for next in c.successors(&at_b) {
            if next.site.part != at_b.site.part {
                assert_eq!(next.state, at_b.state);
                assert_eq!(next.agent, AgentState::Step);
            }
        }
    }

    #[test]
    fn block_crosses_a_block_edge() {
        // Two block-transit halls facing each other: a block pushed in at
        // the left hall's A can travel all the way out of the right hall's B.
        let hall = Push1Grid::parse(
            "port A out=west block_in=yes\nport B out=east block_out=yes\n\n####\nA..B\n####\n",
        )
        .unwrap();
        let s = GadgetSystem {
            instances: vec![
                Instance::new("l", Component::Grid(hall.clone())),
                Instance::new("r", Component::Grid(hall)),
            ],
            edges: vec![Edge::new(
                Endpoint::new("l", "B"),
                Endpoint::new("r", "A"),
                EdgeKind::Block,
            )],
            exposed: vec![expose("l", "A", "A"), expose("r", "B", "B")],
            ..Default::default()
        };
        let g = synthesize(&compose(&s).unwrap(), &ExploreOptions::default())
            .unwrap()
            .gadget;
        let a = gadget_to_nfa(&g);
        let push_in: Symbol = "(A,push)->(A,step)".parse().unwrap();
        let deliver: Symbol = "(A,step)->(B,push)".parse().unwrap();
        assert!(a.accepts(&[push_in.clone(), deliver.clone()]));
        assert!(!a.accepts(&[deliver]));
        // Over a free edge the block is stuck at the seam.
        let mut free = s.clone();
        free.edges[0].kind = EdgeKind::Free;
        let g = synthesize(&compose(&free).unwrap(), &ExploreOptions::default())
            .unwrap()
            .gadget;
        assert!(g
            .transitions
            .iter()
            .all(|t| t.exit != crate::model::Framing::push("B")));
    }

    #[test]
    fn invalid_system_is_rejected() {
        let s = GadgetSystem {
            instances: vec![gadget("d", fixtures::dicrumbler())],
            exposed: vec![expose("d", "C", "C")],
            ..Default::default()
        };
        assert!(matches!(compose(&s), Err(SystemError::Invalid(_))));
    }
}
