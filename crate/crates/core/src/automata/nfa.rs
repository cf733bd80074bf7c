use std::collections::{BTreeMap, BTreeSet};

use crate::model::Symbol;

use super::{AutomataError, TRAP};

/// Nondeterministic automaton over traversal symbols.
///
/// State 0 is the trap state; it has no stored transitions and implicitly
/// loops to itself on every symbol. Every other state accepts, so the
/// recognised language is prefix-closed. A missing entry for `(state,
/// symbol)` means the symbol leads to the trap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Vec<Symbol>,
    start: usize,
    delta: Vec<BTreeMap<usize, BTreeSet<usize>>>,
}

impl Nfa {
    /// `live` live states numbered `1..=live`; `edges` are
    /// `(from, symbol index, to)`. Edges into the trap may be omitted.
    pub fn new(
        alphabet: Vec<Symbol>,
        live: usize,
        start: usize,
        edges: impl IntoIterator<Item = (usize, usize, usize)>,
    ) -> Result<Self, AutomataError> {
        if !alphabet.windows(2).all(|w| w[0] < w[1]) {
            return Err(AutomataError::UnsortedAlphabet);
        }
        if start == TRAP || start > live {
            return Err(AutomataError::BadStart(start));
        }
        let mut delta = vec![BTreeMap::new(); live + 1];
        for (from, sym, to) in edges {
            if from > live || to > live {
                return Err(AutomataError::BadState(from.max(to)));
            }
            if sym >= alphabet.len() {
                return Err(AutomataError::BadSymbol(sym));
            }
            if from == TRAP || to == TRAP {
                continue;
            }
            delta[from]
                .entry(sym)
                .or_insert_with(BTreeSet::new)
                .insert(to);
        }
        Ok(Nfa {
            alphabet,
            start,
            delta,
        })
    }

    pub fn alphabet(&self) -> &[Symbol] {
        &self.alphabet
    }

    pub fn start(&self) -> usize {
        self.start
    }

    /// Number of states including the trap.
    pub fn state_count(&self) -> usize {
        self.delta.len()
    }

    pub fn live_count(&self) -> usize {
        self.delta.len() - 1
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        q != TRAP && q < self.delta.len()
    }

    pub fn symbol_index(&self, sym: &Symbol) -> Option<usize> {
        self.alphabet.binary_search(sym).ok()
    }

    /// Live successors of `q` on symbol index `sym`; empty means trap.
    pub fn targets(&self, q: usize, sym: usize) -> impl Iterator<Item = usize> + '_ {
        self.delta
            .get(q)
            .and_then(|m| m.get(&sym))
            .into_iter()
            .flat_map(|s| s.iter().copied())
    }

    /// `(from, symbol index, to)` for every live-to-live edge, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.delta.iter().enumerate().flat_map(|(q, m)| {
            m.iter()
                .flat_map(move |(&sym, ts)| ts.iter().map(move |&t| (q, sym, t)))
        })
    }

    /// The live states reached after reading `word`.
    pub fn run(&self, word: &[Symbol]) -> BTreeSet<usize> {
        let mut current = BTreeSet::from([self.start]);
        for sym in word {
            let Some(ix) = self.symbol_index(sym) else {
                return BTreeSet::new();
            };
            current = current.iter().flat_map(|&q| self.targets(q, ix)).collect();
            if current.is_empty() {
                break;
            }
        }
        current
    }

    pub fn accepts(&self, word: &[Symbol]) -> bool {
        !self.run(word).is_empty()
    }

    /// The same automaton over a larger alphabet; symbols it did not know
    /// lead to the trap.
    pub fn with_alphabet(&self, alphabet: &[Symbol]) -> Result<Nfa, AutomataError> {
        let remap: Vec<usize> = self
            .alphabet
            .iter()
            .map(|s| {
                alphabet
                    .binary_search(s)
                    .map_err(|_| AutomataError::MissingSymbol(s.to_string()))
            })
            .collect::<Result<_, _>>()?;
        let edges: Vec<_> = self.edges().map(|(q, s, t)| (q, remap[s], t)).collect();
        Nfa::new(alphabet.to_vec(), self.live_count(), self.start, edges)
    }
}

/// Sorted union of two alphabets.
pub fn merge_alphabets(a: &[Symbol], b: &[Symbol]) -> Vec<Symbol> {
    let set: BTreeSet<&Symbol> = a.iter().chain(b).collect();
    set.into_iter().cloned().collect()
}
