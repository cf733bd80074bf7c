use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use super::construction::{Config, Construction, PortFraming, PortSpec};
use super::{AgentState, Diagnostic, Framing, Location, ModelError, Symbol};

/// `(from, entry) -> (to, exit)`: an agent at `entry` while the gadget is in
/// `from` may leave at `exit`, moving the gadget to `to`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GadgetTransition {
    pub from: String,
    pub entry: Framing,
    pub to: String,
    pub exit: Framing,
}

impl GadgetTransition {
    pub fn new(
        from: impl Into<String>,
        entry: Framing,
        to: impl Into<String>,
        exit: Framing,
    ) -> Self {
        GadgetTransition {
            from: from.into(),
            entry,
            to: to.into(),
            exit,
        }
    }

    pub fn symbol(&self) -> Symbol {
        Symbol::new(self.entry.clone(), self.exit.clone())
    }

    /// Enters and leaves at the same framing without changing state.
    pub fn is_trivial(&self) -> bool {
        self.from == self.to && self.entry == self.exit
    }
}

impl fmt::Display for GadgetTransition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} -> {} {}",
            self.from, self.entry, self.to, self.exit
        )
    }
}

/// A gadget with agent states: states, a start state, locations and a
/// transition relation over `(state, location, agent state)` triples.
///
/// Fields are public and unchecked; call [`Gadget::validate`] before
/// relying on the invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gadget {
    pub states: Vec<String>,
    pub start: String,
    pub locations: Vec<Location>,
    pub transitions: Vec<GadgetTransition>,
}

impl Gadget {
    pub fn new(
        states: impl IntoIterator<Item = impl Into<String>>,
        start: impl Into<String>,
        locations: impl IntoIterator<Item = impl Into<Location>>,
        transitions: impl IntoIterator<Item = GadgetTransition>,
    ) -> Self {
        Gadget {
            states: states.into_iter().map(Into::into).collect(),
            start: start.into(),
            locations: locations.into_iter().map(Into::into).collect(),
            transitions: transitions.into_iter().collect(),
        }
    }

    pub fn has_state(&self, q: &str) -> bool {
        self.states.iter().any(|s| s == q)
    }

    pub fn has_location(&self, l: &Location) -> bool {
        self.locations.contains(l)
    }

    pub fn location_set(&self) -> BTreeSet<Location> {
        self.locations.iter().cloned().collect()
    }

    /// One diagnostic per invariant violation; empty means valid.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for q in &self.states {
            if !seen.insert(q.as_str()) {
                out.push(Diagnostic::new(
                    format!("state {q}"),
                    "declared more than once",
                ));
            }
        }
        let mut seen = HashSet::new();
        for l in &self.locations {
            if !seen.insert(l) {
                out.push(Diagnostic::new(
                    format!("location {l}"),
                    "declared more than once",
                ));
            }
        }
        if !self.has_state(&self.start) {
            out.push(Diagnostic::new(
                format!("start_state {}", self.start),
                "is not one of the declared states",
            ));
        }
        let mut seen = HashSet::new();
        for t in &self.transitions {
            for q in [&t.from, &t.to] {
                if !self.has_state(q) {
                    out.push(Diagnostic::new(
                        format!("transition `{t}`"),
                        format!("references unknown state {q}"),
                    ));
                }
            }
            for l in [&t.entry.location, &t.exit.location] {
                if !self.has_location(l) {
                    out.push(Diagnostic::new(
                        format!("transition `{t}`"),
                        format!("references unknown location {l}"),
                    ));
                }
            }
            if !seen.insert(t) {
                out.push(Diagnostic::new(
                    format!("transition `{t}`"),
                    "listed more than once",
                ));
            }
        }
        out
    }

    /// States reachable from `q` by reading `sym`. Empty means the
    /// traversal is not allowed in `q`.
    pub fn step(&self, q: &str, sym: &Symbol) -> Result<BTreeSet<String>, ModelError> {
        if !self.has_state(q) {
            return Err(ModelError::UnknownState(q.to_owned()));
        }
        Ok(self
            .transitions
            .iter()
            .filter(|t| t.from == q && t.entry == sym.entry && t.exit == sym.exit)
            .map(|t| t.to.clone())
            .collect())
    }

    /// Indexed form usable as a construction whose ports are all locations.
    pub fn machine(&self) -> Result<GadgetMachine, ModelError> {
        let diags = self.validate();
        if !diags.is_empty() {
            return Err(ModelError::Invalid(diags));
        }
        GadgetMachine::build(self)
    }
}

/// A validated gadget indexed for fast successor lookup.
///
/// As a construction every location is a port and every configuration is
/// observable, so compressing traces is the identity.
#[derive(Clone, Debug)]
pub struct GadgetMachine {
    states: Vec<String>,
    start: u32,
    ports: Vec<PortSpec>,
    moves: HashMap<(u32, u32, AgentState), Vec<(u32, u32, AgentState)>>,
}

impl GadgetMachine {
    fn build(g: &Gadget) -> Result<Self, ModelError> {
        let state_ix: HashMap<&str, u32> = g
            .states
            .iter()
            .enumerate()
            .map(|(i, q)| (q.as_str(), i as u32))
            .collect();
        let mut locations = g.locations.clone();
        locations.sort();
        let loc_ix: HashMap<&Location, u32> = locations
            .iter()
            .enumerate()
            .map(|(i, l)| (l, i as u32))
            .collect();
        let lookup_state = |q: &str| {
            state_ix
                .get(q)
                .copied()
                .ok_or_else(|| ModelError::UnknownState(q.to_owned()))
        };
        let lookup_loc = |l: &Location| {
            loc_ix
                .get(l)
                .copied()
                .ok_or_else(|| ModelError::UnknownLocation(l.to_string()))
        };
        let mut moves: HashMap<_, Vec<_>> = HashMap::new();
        for t in &g.transitions {
            let key = (
                lookup_state(&t.from)?,
                lookup_loc(&t.entry.location)?,
                t.entry.agent,
            );
            let val = (
                lookup_state(&t.to)?,
                lookup_loc(&t.exit.location)?,
                t.exit.agent,
            );
            moves.entry(key).or_default().push(val);
        }
        for v in moves.values_mut() {
            v.sort();
            v.dedup();
        }
        Ok(GadgetMachine {
            start: lookup_state(&g.start)?,
            states: g.states.clone(),
            ports: locations.into_iter().map(PortSpec::open).collect(),
            moves,
        })
    }

    pub fn state_name(&self, q: u32) -> &str {
        &self.states[q as usize]
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_index(&self, name: &str) -> Option<u32> {
        self.states.iter().position(|s| s == name).map(|i| i as u32)
    }

    pub fn port_index(&self, loc: &Location) -> Option<u32> {
        self.ports
            .iter()
            .position(|p| &p.location == loc)
            .map(|i| i as u32)
    }
}

impl Construction for GadgetMachine {
    type State = u32;
    type Site = u32;

    fn start(&self) -> u32 {
        self.start
    }

    fn ports(&self) -> Vec<PortSpec> {
        self.ports.clone()
    }

    fn successors(&self, cfg: &Config<u32, u32>) -> Vec<Config<u32, u32>> {
        self.moves
            .get(&(cfg.state, cfg.site, cfg.agent))
            .map(|v| v.iter().map(|&(q, l, a)| Config::new(q, l, a)).collect())
            .unwrap_or_default()
    }

    fn observe(&self, cfg: &Config<u32, u32>) -> Option<PortFraming> {
        Some(PortFraming::new(cfg.site as usize, cfg.agent))
    }

    fn enter(&self, state: &u32, at: PortFraming) -> Option<Config<u32, u32>> {
        (at.port < self.ports.len()).then(|| Config::new(*state, at.port as u32, at.agent))
    }

    fn describe_state(&self, state: &u32) -> String {
        self.state_name(*state).to_owned()
    }
}
