//! Simply checkable gadgets: a check-path `(q, I) -> (checked, O)` into a
//! terminal checked state, and a broken set that nothing leaves. Once a
//! problem forces the check-path to be taken, broken states can be deleted
//! (post-selection).

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use crate::model::{AgentState, Gadget, GadgetTransition, Location};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckSpec {
    pub in_port: Location,
    pub out_port: Location,
    pub checked: String,
    pub broken: BTreeSet<String>,
    /// Accept check transitions whose ends are push framings.
    pub allow_push: bool,
}

impl CheckSpec {
    pub fn new(
        in_port: impl Into<Location>,
        out_port: impl Into<Location>,
        checked: impl Into<String>,
    ) -> Self {
        CheckSpec {
            in_port: in_port.into(),
            out_port: out_port.into(),
            checked: checked.into(),
            broken: BTreeSet::new(),
            allow_push: false,
        }
    }

    pub fn with_broken<S: Into<String>>(mut self, broken: impl IntoIterator<Item = S>) -> Self {
        self.broken = broken.into_iter().map(Into::into).collect();
        self
    }

    fn is_check_path(&self, t: &GadgetTransition) -> bool {
        t.entry.location == self.in_port
            && t.exit.location == self.out_port
            && t.to == self.checked
            && (self.allow_push
                || (t.entry.agent == AgentState::Step && t.exit.agent == AgentState::Step))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Rule {
    /// The spec itself is malformed for this gadget.
    Spec,
    /// A non-trivial transition exits at O or lands in the checked state
    /// without being a check-path.
    CheckPath,
    /// A transition leaves the broken set.
    BrokenEscape,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: Rule,
    pub transition: Option<GadgetTransition>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rule = match self.rule {
            Rule::Spec => "spec",
            Rule::CheckPath => "property 1",
            Rule::BrokenEscape => "property 2",
        };
        match &self.transition {
            Some(t) => write!(f, "{rule}: `{t}` {}", self.message),
            None => write!(f, "{rule}: {}", self.message),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckVerdict {
    pub violations: Vec<Violation>,
}

impl CheckVerdict {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("gadget is not simply checkable: {}", .0.violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    NotCheckable(CheckVerdict),
}

/// Checks both properties of a simply checkable gadget, naming every
/// offending transition.
pub fn check_simply_checkable(g: &Gadget, spec: &CheckSpec) -> CheckVerdict {
    let mut violations = Vec::new();
    let mut spec_problem = |message: String| {
        violations.push(Violation {
            rule: Rule::Spec,
            transition: None,
            message,
        })
    };
    for l in [&spec.in_port, &spec.out_port] {
        if !g.has_location(l) {
            spec_problem(format!("unknown location {l}"));
        }
    }
    if !g.has_state(&spec.checked) {
        spec_problem(format!("unknown checked state {}", spec.checked));
    }
    for q in &spec.broken {
        if !g.has_state(q) {
            spec_problem(format!("unknown broken state {q}"));
        }
    }
    if spec.broken.contains(&spec.checked) {
        spec_problem(format!("checked state {} is marked broken", spec.checked));
    }
    if spec.broken.contains(&g.start) {
        spec_problem(format!("start state {} is marked broken", g.start));
    }

    for t in &g.transitions {
        let touches_check = t.exit.location == spec.out_port || t.to == spec.checked;
        if touches_check && !t.is_trivial() && !spec.is_check_path(t) {
            violations.push(Violation {
                rule: Rule::CheckPath,
                transition: Some(t.clone()),
                message: format!(
                    "reaches {} or {} but is not a check-path {} -> {}",
                    spec.out_port, spec.checked, spec.in_port, spec.out_port
                ),
            });
        }
        if spec.broken.contains(&t.from) && !spec.broken.contains(&t.to) {
            violations.push(Violation {
                rule: Rule::BrokenEscape,
                transition: Some(t.clone()),
                message: format!("leaves the broken set for {}", t.to),
            });
        }
    }
    CheckVerdict { violations }
}

/// The largest set of states, other than the start and checked states,
/// that can never again take a check-path and that no transition leaves.
pub fn infer_broken(g: &Gadget, spec: &CheckSpec) -> BTreeSet<String> {
    let mut preds: HashMap<&str, Vec<&str>> = HashMap::new();
    for t in &g.transitions {
        preds
            .entry(t.to.as_str())
            .or_default()
            .push(t.from.as_str());
    }
    let mut alive: HashSet<&str> = g
        .transitions
        .iter()
        .filter(|t| spec.is_check_path(t))
        .map(|t| t.from.as_str())
        .collect();
    let mut queue: VecDeque<&str> = alive.iter().copied().collect();
    while let Some(q) = queue.pop_front() {
        for &p in preds.get(q).into_iter().flatten() {
            if alive.insert(p) {
                queue.push_back(p);
            }
        }
    }
    let mut broken: BTreeSet<String> = g
        .states
        .iter()
        .filter(|q| !alive.contains(q.as_str()) && **q != g.start && **q != spec.checked)
        .cloned()
        .collect();
    // A dead state may still step to the start or checked state; shrink to
    // the largest subset closed under transitions.
    loop {
        let leaky: Vec<String> = g
            .transitions
            .iter()
            .filter(|t| broken.contains(&t.from) && !broken.contains(&t.to))
            .map(|t| t.from.clone())
            .collect();
        if leaky.is_empty() {
            return broken;
        }
        for q in leaky {
            broken.remove(&q);
        }
    }
}

/// Deletes the broken states and everything touching them, then keeps only
/// what is reachable from the start. The checked state always stays.
pub fn post_select(g: &Gadget, spec: &CheckSpec) -> Result<Gadget, CheckError> {
    let verdict = check_simply_checkable(g, spec);
    if !verdict.passes() {
        return Err(CheckError::NotCheckable(verdict));
    }
    let kept: Vec<&GadgetTransition> = g
        .transitions
        .iter()
        .filter(|t| !spec.broken.contains(&t.from) && !spec.broken.contains(&t.to))
        .collect();
    let mut reach: HashSet<&str> = HashSet::from([g.start.as_str()]);
    let mut queue = VecDeque::from([g.start.as_str()]);
    while let Some(q) = queue.pop_front() {
        for t in kept.iter().filter(|t| t.from == q) {
            if reach.insert(t.to.as_str()) {
                queue.push_back(t.to.as_str());
            }
        }
    }
    reach.insert(spec.checked.as_str());
    Ok(Gadget {
        states: g
            .states
            .iter()
            .filter(|q| reach.contains(q.as_str()))
            .cloned()
            .collect(),
        start: g.start.clone(),
        locations: g.locations.clone(),
        transitions: kept
            .into_iter()
            .filter(|t| reach.contains(t.from.as_str()))
            .cloned()
            .collect(),
    })
}
