//! Independent oracles shared by the integration and acceptance tests.
//! Nothing here calls the library's own simulation code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use gadgetcheck::automata::{Dfa, TRAP};
use gadgetcheck::fixtures;
use gadgetcheck::model::{AgentState, Gadget, Location, Symbol};
use gadgetcheck::systems::{Component, Edge, EdgeKind, Endpoint, Exposure, GadgetSystem, Instance};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------- levels

/// A random solver level of at most 5x5 cells with one `@` and one `G`.
pub fn random_level(r: &mut impl Rng) -> String {
    let w = r.gen_range(2..=5);
    let h = r.gen_range(1..=5);
    let mut cells: Vec<Vec<char>> = (0..h)
        .map(|_| {
            (0..w)
                .map(|_| match r.gen_range(0..10) {
                    0..=4 => '.',
                    5..=6 => '#',
                    _ => 'b',
                })
                .collect()
        })
        .collect();
    let mut spots: Vec<(usize, usize)> = (0..h).flat_map(|y| (0..w).map(move |x| (x, y))).collect();
    spots.shuffle(r);
    let (sx, sy) = spots[0];
    let (gx, gy) = spots[1];
    cells[sy][sx] = '@';
    cells[gy][gx] = 'G';
    cells
        .iter()
        .map(|row| row.iter().collect::<String>() + "\n")
        .collect()
}

fn level_cells(level: &str) -> Vec<Vec<char>> {
    level.lines().map(|l| l.chars().collect()).collect()
}

fn find(cells: &[Vec<char>], c: char) -> (i32, i32) {
    for (y, row) in cells.iter().enumerate() {
        if let Some(x) = row.iter().position(|&ch| ch == c) {
            return (x as i32, y as i32);
        }
    }
    panic!("no {c} in level");
}

const DIRS: [(char, i32, i32); 4] = [('u', 0, -1), ('d', 0, 1), ('l', -1, 0), ('r', 1, 0)];

fn open(cells: &[Vec<char>], (x, y): (i32, i32)) -> bool {
    y >= 0
        && x >= 0
        && (y as usize) < cells.len()
        && (x as usize) < cells[y as usize].len()
        && cells[y as usize][x as usize] != '#'
}

/// One move on the raw character grid: returns the new agent cell and
/// block set, or `None` if the move is illegal.
fn naive_move(
    cells: &[Vec<char>],
    agent: (i32, i32),
    blocks: &BTreeSet<(i32, i32)>,
    (dx, dy): (i32, i32),
) -> Option<((i32, i32), BTreeSet<(i32, i32)>)> {
    let to = (agent.0 + dx, agent.1 + dy);
    if !open(cells, to) {
        return None;
    }
    if !blocks.contains(&to) {
        return Some((to, blocks.clone()));
    }
    let beyond = (to.0 + dx, to.1 + dy);
    if !open(cells, beyond) || blocks.contains(&beyond) {
        return None;
    }
    let mut next = blocks.clone();
    next.remove(&to);
    next.insert(beyond);
    Some((to, next))
}

/// Length of a shortest solution by plain BFS over (agent, blocks), or
/// `None` when the goal cannot be reached.
pub fn naive_shortest(level: &str) -> Option<usize> {
    let cells = level_cells(level);
    let start = find(&cells, '@');
    let goal = find(&cells, 'G');
    let blocks: BTreeSet<(i32, i32)> = cells
        .iter()
        .enumerate()
        .flat_map(|(y, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, &c)| c == 'b')
                .map(move |(x, _)| (x as i32, y as i32))
        })
        .collect();
    let mut seen = HashSet::from([(start, blocks.clone())]);
    let mut queue = VecDeque::from([(start, blocks, 0usize)]);
    while let Some((agent, blocks, d)) = queue.pop_front() {
        if agent == goal {
            return Some(d);
        }
        for &(_, dx, dy) in &DIRS {
            if let Some(next) = naive_move(&cells, agent, &blocks, (dx, dy)) {
                if seen.insert(next.clone()) {
                    queue.push_back((next.0, next.1, d + 1));
                }
            }
        }
    }
    None
}

/// Replays LURD letters on the raw grid; true iff every move is legal,
/// case matches whether a block moved, and the agent ends on `G`.
pub fn replay_reaches_goal(level: &str, moves: &str) -> bool {
    let cells = level_cells(level);
    let mut agent = find(&cells, '@');
    let goal = find(&cells, 'G');
    let mut blocks: BTreeSet<(i32, i32)> = cells
        .iter()
        .enumerate()
        .flat_map(|(y, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, &c)| c == 'b')
                .map(move |(x, _)| (x as i32, y as i32))
        })
        .collect();
    for m in moves.chars() {
        let Some(&(_, dx, dy)) = DIRS.iter().find(|d| d.0 == m.to_ascii_lowercase()) else {
            return false;
        };
        let Some((to, next)) = naive_move(&cells, agent, &blocks, (dx, dy)) else {
            return false;
        };
        if (next != blocks) != m.is_ascii_uppercase() {
            return false;
        }
        agent = to;
        blocks = next;
    }
    agent == goal
}

// ---------------------------------------------------------------- systems

/// A random system of one to three fixture gadgets joined by free edges,
/// with at least one exposed location.
pub fn random_system(r: &mut impl Rng) -> GadgetSystem {
    let pool = [
        fixtures::wire(),
        fixtures::dicrumbler(),
        fixtures::self_closing_door(),
        fixtures::one_toggle(),
        fixtures::toy_checkable_diode(),
    ];
    let n = r.gen_range(1..=3);
    let instances: Vec<Instance> = (0..n)
        .map(|i| {
            Instance::new(
                format!("g{i}"),
                Component::Gadget(pool.choose(r).unwrap().clone()),
            )
        })
        .collect();
    let mut endpoints: Vec<Endpoint> = Vec::new();
    for inst in &instances {
        if let Component::Gadget(g) = &inst.component {
            for l in &g.locations {
                endpoints.push(Endpoint::new(inst.name.clone(), l.as_str()));
            }
        }
    }
    endpoints.shuffle(r);
    let mut exposed = Vec::new();
    let mut edges = Vec::new();
    let mut linked: BTreeSet<usize> = BTreeSet::new();
    let labels = ["P", "Q", "R"];
    for i in 0..endpoints.len() {
        if linked.contains(&i) {
            continue;
        }
        let roll = r.gen_range(0..10);
        if exposed.len() < labels.len()
            && (roll < 4 || (exposed.is_empty() && i + 1 == endpoints.len()))
        {
            exposed.push(Exposure::new(endpoints[i].clone(), labels[exposed.len()]));
        } else if roll < 8 {
            let partners: Vec<usize> = (i + 1..endpoints.len())
                .filter(|j| !linked.contains(j))
                .collect();
            if let Some(&j) = partners.choose(r) {
                edges.push(Edge::new(
                    endpoints[i].clone(),
                    endpoints[j].clone(),
                    EdgeKind::Free,
                ));
                linked.insert(i);
                linked.insert(j);
            }
        }
    }
    if exposed.is_empty() {
        let free = match (0..endpoints.len()).find(|i| !linked.contains(i)) {
            Some(i) => endpoints[i].clone(),
            None => edges.pop().expect("every endpoint is on an edge").a,
        };
        exposed.push(Exposure::new(free, "P"));
    }
    GadgetSystem {
        instances,
        edges,
        exposed,
        axes: Vec::new(),
    }
}

/// Word membership for a system of step-only gadgets, by simulating the
/// product directly: the agent moves through gadget transitions and free
/// edges, and a symbol is a walk from one exposed location to the next.
pub struct ProductOracle {
    gadgets: Vec<Gadget>,
    exposed_at: HashMap<(usize, String), Location>,
    exposed_label: BTreeMap<Location, (usize, String)>,
    links: HashMap<(usize, String), Vec<(usize, String)>>,
}

type Vector = Vec<String>;

impl ProductOracle {
    pub fn new(s: &GadgetSystem) -> Self {
        let index: HashMap<&str, usize> = s
            .instances
            .iter()
            .enumerate()
            .map(|(i, x)| (x.name.as_str(), i))
            .collect();
        let gadgets = s
            .instances
            .iter()
            .map(|x| match &x.component {
                Component::Gadget(g) => g.clone(),
                _ => panic!("oracle handles gadgets only"),
            })
            .collect();
        let at = |e: &Endpoint| (index[e.instance.as_str()], e.location.as_str().to_owned());
        let mut exposed_at = HashMap::new();
        let mut exposed_label = BTreeMap::new();
        for x in &s.exposed {
            exposed_at.insert(at(&x.endpoint), x.label.clone());
            exposed_label.insert(x.label.clone(), at(&x.endpoint));
        }
        let mut links: HashMap<(usize, String), Vec<(usize, String)>> = HashMap::new();
        for e in &s.edges {
            assert_eq!(e.kind, EdgeKind::Free);
            links.entry(at(&e.a)).or_default().push(at(&e.b));
            links.entry(at(&e.b)).or_default().push(at(&e.a));
        }
        ProductOracle {
            gadgets,
            exposed_at,
            exposed_label,
            links,
        }
    }

    pub fn labels(&self) -> Vec<Location> {
        self.exposed_label.keys().cloned().collect()
    }

    pub fn start(&self) -> BTreeSet<Vector> {
        BTreeSet::from([self.gadgets.iter().map(|g| g.start.clone()).collect()])
    }

    /// States after reading `sym` from any of `from`.
    pub fn step(&self, from: &BTreeSet<Vector>, sym: &Symbol) -> BTreeSet<Vector> {
        let mut out = BTreeSet::new();
        if sym.entry.agent != AgentState::Step || sym.exit.agent != AgentState::Step {
            return out;
        }
        let Some(entry) = self.exposed_label.get(&sym.entry.location) else {
            return out;
        };
        for v in from {
            let mut seen: HashSet<(Vector, (usize, String))> = HashSet::new();
            let mut stack = vec![(v.clone(), entry.clone())];
            while let Some((v, (i, loc))) = stack.pop() {
                let mut next: Vec<(Vector, (usize, String))> = Vec::new();
                for t in &self.gadgets[i].transitions {
                    if t.from == v[i]
                        && t.entry.location.as_str() == loc
                        && t.entry.agent == AgentState::Step
                    {
                        if t.exit.agent != AgentState::Step {
                            continue;
                        }
                        let mut w = v.clone();
                        w[i] = t.to.clone();
                        next.push((w, (i, t.exit.location.as_str().to_owned())));
                    }
                }
                for p in self.links.get(&(i, loc.clone())).into_iter().flatten() {
                    next.push((v.clone(), p.clone()));
                }
                for (w, at) in next {
                    if let Some(label) = self.exposed_at.get(&at) {
                        if *label == sym.exit.location {
                            out.insert(w);
                        }
                        continue;
                    }
                    if seen.insert((w.clone(), at.clone())) {
                        stack.push((w, at));
                    }
                }
            }
        }
        out
    }
}

// ---------------------------------------------------------------- automata

/// Myhill–Nerode classes among the reachable live states of `d`, by
/// comparing acceptance of every word shorter than the state count.
pub fn brute_force_classes(d: &Dfa) -> usize {
    let n = d.state_count();
    let sigma = d.alphabet().len();
    let mut reach = BTreeSet::from([d.start()]);
    let mut frontier = vec![d.start()];
    while let Some(q) = frontier.pop() {
        for s in 0..sigma {
            let t = d.next(q, s);
            if t != TRAP && reach.insert(t) {
                frontier.push(t);
            }
        }
    }
    // For each state, where every word of the current length leads, in a
    // fixed word order; the concatenation over lengths is its signature.
    let mut signatures: BTreeMap<usize, Vec<bool>> =
        reach.iter().map(|&q| (q, vec![true])).collect();
    let mut ends: BTreeMap<usize, Vec<usize>> = reach.iter().map(|&q| (q, vec![q])).collect();
    for _ in 1..n {
        for (q, layer) in ends.iter_mut() {
            *layer = layer
                .iter()
                .flat_map(|&e| (0..sigma).map(move |s| d.next(e, s)))
                .collect();
            signatures
                .get_mut(q)
                .unwrap()
                .extend(layer.iter().map(|&e| e != TRAP));
        }
    }
    signatures.into_values().collect::<BTreeSet<_>>().len()
}

/// A sorted alphabet of `k` made-up symbols.
pub fn symbols(k: usize) -> Vec<Symbol> {
    let mut out: Vec<Symbol> = (0..k)
        .map(|i| Symbol::walk(&format!("x{i}"), "y"))
        .collect();
    out.sort();
    out
}

/// A random total DFA with `live` live states (1-based) plus the trap.
pub fn random_dfa(r: &mut impl Rng, live: usize, sigma: usize) -> Dfa {
    let mut table = vec![vec![TRAP; sigma]];
    for _ in 0..live {
        table.push(
            (0..sigma)
                .map(|_| {
                    if r.gen_bool(0.2) {
                        TRAP
                    } else {
                        r.gen_range(1..=live)
                    }
                })
                .collect(),
        );
    }
    Dfa::from_table(symbols(sigma), 1, table).unwrap()
}
