use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::model::Symbol;

use super::{AutomataError, Nfa, TRAP};

/// Deterministic automaton with a total transition table.
///
/// Row 0 is the trap and maps every symbol to itself; every other state
/// accepts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Vec<Symbol>,
    start: usize,
    table: Vec<Vec<usize>>,
}

impl Dfa {
    /// Builds from a table whose row 0 is the trap. Rows must be total.
    pub fn from_table(
        alphabet: Vec<Symbol>,
        start: usize,
        table: Vec<Vec<usize>>,
    ) -> Result<Self, AutomataError> {
        if !alphabet.windows(2).all(|w| w[0] < w[1]) {
            return Err(AutomataError::UnsortedAlphabet);
        }
        if table.is_empty() || start == TRAP || start >= table.len() {
            return Err(AutomataError::BadStart(start));
        }
        for row in &table {
            if row.len() != alphabet.len() {
                return Err(AutomataError::NotTotal);
            }
            if let Some(&bad) = row.iter().find(|&&t| t >= table.len()) {
                return Err(AutomataError::BadState(bad));
            }
        }
        if table[TRAP].iter().any(|&t| t != TRAP) {
            return Err(AutomataError::TrapEscapes);
        }
        Ok(Dfa {
            alphabet,
            start,
            table,
        })
    }

    pub fn alphabet(&self) -> &[Symbol] {
        &self.alphabet
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn state_count(&self) -> usize {
        self.table.len()
    }

    pub fn live_count(&self) -> usize {
        self.table.len() - 1
    }

    pub fn next(&self, q: usize, sym: usize) -> usize {
        self.table[q][sym]
    }

    pub fn accepts(&self, word: &[Symbol]) -> bool {
        let mut q = self.start;
        for sym in word {
            match self.alphabet.binary_search(sym) {
                Ok(ix) => q = self.table[q][ix],
                Err(_) => return false,
            }
            if q == TRAP {
                return false;
            }
        }
        true
    }

    pub fn to_nfa(&self) -> Nfa {
        let edges = self.table.iter().enumerate().flat_map(|(q, row)| {
            row.iter()
                .enumerate()
                .filter(|&(_, &t)| t != TRAP)
                .map(move |(s, &t)| (q, s, t))
        });
        Nfa::new(self.alphabet.clone(), self.live_count(), self.start, edges)
            .expect("dfa table is well formed")
    }

    /// Renumbers live states in breadth-first discovery order from the
    /// start, expanding symbols in canonical order, and drops unreachable
    /// states. The trap stays at 0 whether or not it is reachable.
    pub fn canonical(&self) -> Dfa {
        let mut order = vec![usize::MAX; self.table.len()];
        order[TRAP] = TRAP;
        order[self.start] = 1;
        let mut next_id = 2;
        let mut queue = VecDeque::from([self.start]);
        let mut visit = vec![self.start];
        while let Some(q) = queue.pop_front() {
            for &t in &self.table[q] {
                if order[t] == usize::MAX {
                    order[t] = next_id;
                    next_id += 1;
                    queue.push_back(t);
                    visit.push(t);
                }
            }
        }
        let mut table = vec![vec![TRAP; self.alphabet.len()]; next_id];
        for &q in &visit {
            table[order[q]] = self.table[q].iter().map(|&t| order[t]).collect();
        }
        Dfa {
            alphabet: self.alphabet.clone(),
            start: 1,
            table,
        }
    }
}

/// Subset construction. Subsets are discovered breadth-first in canonical
/// symbol order; the empty subset is the trap.
pub fn determinize(a: &Nfa) -> Dfa {
    let sigma = a.alphabet().len();
    let start: BTreeSet<usize> = BTreeSet::from([a.start()]);
    let mut ids: HashMap<BTreeSet<usize>, usize> = HashMap::new();
    ids.insert(BTreeSet::new(), TRAP);
    ids.insert(start.clone(), 1);
    let mut table = vec![vec![TRAP; sigma], vec![TRAP; sigma]];
    let mut queue = VecDeque::from([start]);
    while let Some(subset) = queue.pop_front() {
        let from = ids[&subset];
        for sym in 0..sigma {
            let target: BTreeSet<usize> = subset.iter().flat_map(|&q| a.targets(q, sym)).collect();
            let id = match ids.get(&target) {
                Some(&id) => id,
                None => {
                    let id = table.len();
                    table.push(vec![TRAP; sigma]);
                    ids.insert(target.clone(), id);
                    queue.push_back(target);
                    id
                }
            };
            table[from][sym] = id;
        }
    }
    Dfa {
        alphabet: a.alphabet().to_vec(),
        start: 1,
        table,
    }
}

/// Minimal equivalent automaton by Moore partition refinement, returned in
/// canonical numbering.
pub fn minimize(d: &Dfa) -> Dfa {
    let d = d.canonical();
    let n = d.state_count();
    // Initial split: trap versus live.
    let mut class: Vec<usize> = (0..n).map(|q| usize::from(q != TRAP)).collect();
    let mut class_count = if n > 1 { 2 } else { 1 };
    loop {
        let mut signatures: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let mut next = vec![0; n];
        for q in 0..n {
            let sig = (
                class[q],
                d.table[q].iter().map(|&t| class[t]).collect::<Vec<_>>(),
            );
            let fresh = signatures.len();
            next[q] = *signatures.entry(sig).or_insert(fresh);
        }
        let count = signatures.len();
        class = next;
        if count == class_count {
            break;
        }
        class_count = count;
    }
    // Quotient: pick one representative row per class; the trap's class
    // becomes 0 and the start's class 1 before canonical renumbering.
    let trap_class = class[TRAP];
    let mut remap = vec![usize::MAX; class_count];
    remap[trap_class] = TRAP;
    let mut next_id = 1;
    for q in 0..n {
        if remap[class[q]] == usize::MAX {
            remap[class[q]] = next_id;
            next_id += 1;
        }
    }
    let mut table = vec![Vec::new(); next_id];
    for q in 0..n {
        let row = &mut table[remap[class[q]]];
        if row.is_empty() {
            *row = d.table[q].iter().map(|&t| remap[class[t]]).collect();
        }
    }
    Dfa {
        alphabet: d.alphabet.clone(),
        start: remap[class[d.start]],
        table,
    }
    .canonical()
}
