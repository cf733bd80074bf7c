//! Construction to automaton to gadget, and observational equivalence.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::automata::{determinize, equivalent, minimize, Nfa, Side, Verdict, TRAP};
use crate::model::{
    full_alphabet, AgentState, Config, Construction, Framing, Gadget, GadgetTransition, Location,
    PortFraming, Symbol,
};

/// Default cap on explored configurations.
pub const DEFAULT_BUDGET: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExploreOptions {
    /// Hard cap on configurations explored; reaching it is an error, never
    /// a silent truncation.
    pub budget: usize,
    /// Worker threads; 0 means the machine's parallelism.
    pub threads: usize,
}

impl Default for ExploreOptions {
    fn default() -> Self {
        ExploreOptions {
            budget: DEFAULT_BUDGET,
            threads: 0,
        }
    }
}

impl ExploreOptions {
    pub fn with_threads(threads: usize) -> Self {
        ExploreOptions {
            threads,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SynthesisError {
    #[error("configuration budget of {limit} exceeded ({limit} configurations explored)")]
    BudgetExceeded { limit: usize },
    #[error("could not start worker pool: {0}")]
    ThreadPool(String),
}

/// The automaton of a construction plus exploration statistics.
#[derive(Clone, Debug)]
pub struct Exploration {
    pub nfa: Nfa,
    /// Total configurations popped across all searches.
    pub configurations: usize,
}

/// Everything reached from one observable configuration.
type Reached<Q> = Vec<(PortFraming, PortFraming, Q)>;

struct Explorer<'a, C: Construction> {
    c: &'a C,
    ports: usize,
    budget: usize,
    explored: AtomicUsize,
}

impl<C: Construction> Explorer<'_, C> {
    fn tick(&self) -> Result<(), SynthesisError> {
        if self.explored.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return Err(SynthesisError::BudgetExceeded { limit: self.budget });
        }
        Ok(())
    }

    /// Breadth-first search from one observable configuration through
    /// unobservable configurations only, collecting every observable
    /// configuration reachable that way.
    fn expand_seed(
        &self,
        seed: &Config<C::State, C::Site>,
        entry: PortFraming,
        out: &mut Reached<C::State>,
    ) -> Result<(), SynthesisError> {
        let mut seen: HashSet<Config<C::State, C::Site>> = HashSet::new();
        let mut queue = VecDeque::from([seed.clone()]);
        let mut first = true;
        while let Some(cfg) = queue.pop_front() {
            self.tick()?;
            // The seed is observable; everything else in the queue is not.
            let inside = first || self.c.observe(&cfg).is_none();
            first = false;
            if !inside {
                continue;
            }
            for next in self.c.successors(&cfg) {
                match self.c.observe(&next) {
                    Some(exit) => out.push((entry, exit, next.state)),
                    None => {
                        if seen.insert(next.clone()) {
                            queue.push_back(next);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Expands every entry framing of a construction state.
    fn expand_state(&self, q: &C::State) -> Result<Reached<C::State>, SynthesisError> {
        let mut out = Vec::new();
        for port in 0..self.ports {
            for agent in AgentState::ALL {
                let entry = PortFraming::new(port, agent);
                if let Some(seed) = self.c.enter(q, entry) {
                    self.expand_seed(&seed, entry, &mut out)?;
                }
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

fn pool(threads: usize) -> Result<rayon::ThreadPool, SynthesisError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| SynthesisError::ThreadPool(e.to_string()))
}

/// Builds an NFA recognising the observable transition sequences of `c`.
///
/// Note the asymmetry with the search: seeds and seen-set keys are whole
/// observable configurations `(q, port, agent state)`, but automaton states
/// are construction states `q` alone, because the entry point travels on
/// the symbol. Whenever a new `q` is discovered every entry framing of it
/// is seeded, since an agent outside may walk to any port before entering.
///
/// States are explored one breadth-first layer at a time; the layer is
/// expanded in parallel and merged in a fixed order, so the result does
/// not depend on the number of workers.
pub fn construction_to_nfa<C: Construction>(
    c: &C,
    opts: &ExploreOptions,
) -> Result<Exploration, SynthesisError> {
    let ports = c.ports();
    let mut locations: Vec<&Location> = ports.iter().map(|p| &p.location).collect();
    locations.sort();
    let alphabet = full_alphabet(locations.iter().copied());
    let framing = |pf: PortFraming| Framing::new(ports[pf.port].location.clone(), pf.agent);
    let symbol_ix = |a: PortFraming, b: PortFraming| {
        alphabet
            .binary_search(&Symbol::new(framing(a), framing(b)))
            .expect("alphabet covers every port pair")
    };

    let explorer = Explorer {
        c,
        ports: ports.len(),
        budget: opts.budget,
        explored: AtomicUsize::new(0),
    };
    // One worker runs inline. Besides saving a thread, this keeps callers
    // that are themselves rayon tasks from blocking inside a nested pool,
    // where the waiting worker would steal and recurse.
    let pool = if opts.threads == 1 {
        None
    } else {
        Some(pool(opts.threads)?)
    };

    let start = c.start();
    let mut ids: HashMap<C::State, usize> = HashMap::new();
    ids.insert(start.clone(), 1);
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut frontier = vec![start];
    while !frontier.is_empty() {
        let layer: Vec<Reached<C::State>> = match &pool {
            Some(pool) => pool.install(|| {
                frontier
                    .par_iter()
                    .map(|q| explorer.expand_state(q))
                    .collect::<Result<_, _>>()
            })?,
            None => frontier
                .iter()
                .map(|q| explorer.expand_state(q))
                .collect::<Result<_, _>>()?,
        };
        let mut next_frontier = Vec::new();
        for (q, reached) in frontier.iter().zip(layer) {
            let from = ids[q];
            for (entry, exit, target) in reached {
                let to = match ids.get(&target) {
                    Some(&id) => id,
                    None => {
                        let id = ids.len() + 1;
                        ids.insert(target.clone(), id);
                        next_frontier.push(target);
                        id
                    }
                };
                edges.push((from, symbol_ix(entry, exit), to));
            }
        }
        frontier = next_frontier;
    }
    let nfa = Nfa::new(alphabet, ids.len(), 1, edges).expect("explored automaton is well formed");
    Ok(Exploration {
        nfa,
        configurations: explorer.explored.into_inner(),
    })
}

/// The automaton of a gadget: one live state per gadget state, over the
/// full alphabet of its locations.
pub fn gadget_to_nfa(g: &Gadget) -> Nfa {
    let alphabet = full_alphabet(&g.locations);
    let ix: HashMap<&str, usize> = g
        .states
        .iter()
        .enumerate()
        .map(|(i, q)| (q.as_str(), i + 1))
        .collect();
    let edges: Vec<_> = g
        .transitions
        .iter()
        .filter_map(|t| {
            let sym = alphabet.binary_search(&t.symbol()).ok()?;
            Some((*ix.get(t.from.as_str())?, sym, *ix.get(t.to.as_str())?))
        })
        .collect();
    let start = ix.get(g.start.as_str()).copied().unwrap_or(1);
    Nfa::new(alphabet, g.states.len().max(1), start, edges)
        .expect("gadget automaton is well formed")
}

/// Reads a gadget off an automaton: live states become gadget states
/// `S0, S1, ...` (in automaton numbering), the locations are those the
/// alphabet mentions, and every live-to-live edge becomes a transition.
pub fn nfa_to_gadget(a: &Nfa) -> Gadget {
    let name = |q: usize| format!("S{}", q - 1);
    let locations: BTreeSet<Location> = a
        .alphabet()
        .iter()
        .flat_map(|s| [s.entry.location.clone(), s.exit.location.clone()])
        .collect();
    let mut transitions: Vec<(usize, &Symbol, usize)> = a
        .edges()
        .filter(|&(q, _, t)| q != TRAP && t != TRAP)
        .map(|(q, s, t)| (q, &a.alphabet()[s], t))
        .collect();
    transitions.sort();
    Gadget {
        states: (1..a.state_count()).map(name).collect(),
        start: name(a.start()),
        locations: locations.into_iter().collect(),
        transitions: transitions
            .into_iter()
            .map(|(q, s, t)| {
                GadgetTransition::new(name(q), s.entry.clone(), name(t), s.exit.clone())
            })
            .collect(),
    }
}

/// Result of [`synthesize`].
#[derive(Clone, Debug)]
pub struct Synthesis {
    pub gadget: Gadget,
    /// Live states of the explored (nondeterministic) automaton.
    pub nfa_states: usize,
    pub configurations: usize,
}

/// The minimal deterministic gadget observationally equivalent to `c`, in
/// canonical form: states numbered breadth-first from the start, symbols
/// expanded in canonical order, transitions sorted.
pub fn synthesize<C: Construction>(
    c: &C,
    opts: &ExploreOptions,
) -> Result<Synthesis, SynthesisError> {
    let exploration = construction_to_nfa(c, opts)?;
    let dfa = minimize(&determinize(&exploration.nfa));
    Ok(Synthesis {
        gadget: nfa_to_gadget(&dfa.to_nfa()),
        nfa_states: exploration.nfa.live_count(),
        configurations: exploration.configurations,
    })
}

/// Which side of a construction/gadget comparison accepts a witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessSide {
    Construction,
    Gadget,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivalenceVerdict {
    Equivalent,
    PortMismatch {
        construction_only: Vec<Location>,
        gadget_only: Vec<Location>,
    },
    LanguageMismatch {
        witness: Vec<Symbol>,
        side: WitnessSide,
    },
}

impl EquivalenceVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, EquivalenceVerdict::Equivalent)
    }
}

/// Same port set, then same language of observable transition sequences.
pub fn verify_equivalence<C: Construction>(
    c: &C,
    g: &Gadget,
    opts: &ExploreOptions,
) -> Result<EquivalenceVerdict, SynthesisError> {
    let ports: BTreeSet<Location> = c.ports().into_iter().map(|p| p.location).collect();
    let locations = g.location_set();
    if ports != locations {
        return Ok(EquivalenceVerdict::PortMismatch {
            construction_only: ports.difference(&locations).cloned().collect(),
            gadget_only: locations.difference(&ports).cloned().collect(),
        });
    }
    let ours = construction_to_nfa(c, opts)?.nfa;
    Ok(match equivalent(&ours, &gadget_to_nfa(g)) {
        Verdict::Equal => EquivalenceVerdict::Equivalent,
        Verdict::Unequal {
            witness,
            accepted_by,
        } => EquivalenceVerdict::LanguageMismatch {
            witness,
            side: match accepted_by {
                Side::Left => WitnessSide::Construction,
                Side::Right => WitnessSide::Gadget,
            },
        },
    })
}
