use std::collections::{HashMap, VecDeque};

use crate::model::Symbol;

use super::{determinize, merge_alphabets, Nfa, TRAP};

/// Which input of a comparison accepts a witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    Unequal {
        witness: Vec<Symbol>,
        accepted_by: Side,
    },
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::Equal)
    }
}

/// Language equality over the union alphabet.
///
/// Both sides are determinized and their product explored breadth-first,
/// symbols in canonical order, so an unequal verdict carries the shortest
/// distinguishing word and, among those, the least in canonical order.
/// Both languages are prefix-closed, so a difference shows up exactly when
/// one side falls into its trap while the other stays live.
pub fn equivalent(a: &Nfa, b: &Nfa) -> Verdict {
    let sigma = merge_alphabets(a.alphabet(), b.alphabet());
    let da = determinize(&a.with_alphabet(&sigma).expect("superset alphabet"));
    let db = determinize(&b.with_alphabet(&sigma).expect("superset alphabet"));
    let root = (da.start(), db.start());
    let mut parent: HashMap<(usize, usize), Option<((usize, usize), usize)>> = HashMap::new();
    parent.insert(root, None);
    let mut queue = VecDeque::from([root]);
    while let Some(pair) = queue.pop_front() {
        for sym in 0..sigma.len() {
            let next = (da.next(pair.0, sym), db.next(pair.1, sym));
            if next == (TRAP, TRAP) || parent.contains_key(&next) {
                continue;
            }
            parent.insert(next, Some((pair, sym)));
            if next.0 == TRAP || next.1 == TRAP {
                let mut word = Vec::new();
                let mut at = next;
                while let Some(Some((prev, s))) = parent.get(&at) {
                    word.push(sigma[*s].clone());
                    at = *prev;
                }
                word.reverse();
                let accepted_by = if next.0 == TRAP {
                    Side::Right
                } else {
                    Side::Left
                };
                return Verdict::Unequal {
                    witness: word,
                    accepted_by,
                };
            }
            queue.push_back(next);
        }
    }
    Verdict::Equal
}
