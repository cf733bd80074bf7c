use std::fmt::{self, Debug};
use std::hash::Hash;
use std::str::FromStr;

use super::{AgentState, Framing, Location, ModelError, Symbol};

/// Axis along which a block may cross a port.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    Horizontal,
    Vertical,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::Horizontal => "horizontal",
            Axis::Vertical => "vertical",
        })
    }
}

impl FromStr for Axis {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "horizontal" => Ok(Axis::Horizontal),
            "vertical" => Ok(Axis::Vertical),
            other => Err(ModelError::Syntax(format!(
                "unknown axis `{other}` (expected `horizontal` or `vertical`)"
            ))),
        }
    }
}

/// A port of a construction and what may cross it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PortSpec {
    pub location: Location,
    pub block_in: bool,
    pub block_out: bool,
    pub axis: Option<Axis>,
}

impl PortSpec {
    /// A port with no block restrictions and no declared axis, as used for
    /// abstract gadget locations.
    pub fn open(location: Location) -> Self {
        PortSpec {
            location,
            block_in: true,
            block_out: true,
            axis: None,
        }
    }
}

/// A port index (into [`Construction::ports`]) plus the agent state there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PortFraming {
    pub port: usize,
    pub agent: AgentState,
}

impl PortFraming {
    pub fn new(port: usize, agent: AgentState) -> Self {
        PortFraming { port, agent }
    }
}

/// `(state, site, agent state)`: the construction state, where the agent
/// is, and what it is doing.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Config<Q, P> {
    pub state: Q,
    pub site: P,
    pub agent: AgentState,
}

impl<Q, P> Config<Q, P> {
    pub fn new(state: Q, site: P, agent: AgentState) -> Self {
        Config { state, site, agent }
    }
}

/// A low-level world whose transitions are derived from rules rather than
/// listed: Push-1 grids, composed systems, and gadgets viewed as
/// constructions all implement this.
///
/// `successors` and `observe` must be pure: the same configuration always
/// yields the same answers. Explorers share one construction across worker
/// threads.
pub trait Construction: Sync {
    type State: Clone + Eq + Hash + Ord + Debug + Send + Sync;
    type Site: Clone + Eq + Hash + Ord + Debug + Send + Sync;

    fn start(&self) -> Self::State;

    /// Ports, sorted by location. Port indices elsewhere refer to this order.
    fn ports(&self) -> Vec<PortSpec>;

    /// Every configuration reachable in one transition.
    fn successors(
        &self,
        cfg: &Config<Self::State, Self::Site>,
    ) -> Vec<Config<Self::State, Self::Site>>;

    /// The port framing a configuration is observed at, or `None` if the
    /// agent is inside.
    fn observe(&self, cfg: &Config<Self::State, Self::Site>) -> Option<PortFraming>;

    /// The configuration of an agent arriving at a port from outside while
    /// the construction is in `state`, or `None` if it cannot be there.
    fn enter(
        &self,
        state: &Self::State,
        at: PortFraming,
    ) -> Option<Config<Self::State, Self::Site>>;

    fn describe_state(&self, state: &Self::State) -> String {
        format!("{state:?}")
    }
}

/// A sequence of configurations starting in the construction's start state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace<Q, P> {
    pub steps: Vec<Config<Q, P>>,
}

impl<Q, P> Trace<Q, P> {
    pub fn new(steps: Vec<Config<Q, P>>) -> Self {
        Trace { steps }
    }
}

/// Why a step of a trace is not legal.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TraceError {
    #[error("trace is empty")]
    Empty,
    #[error("trace does not begin in the start state")]
    WrongStart,
    #[error("step {index} is neither a transition nor a move outside the construction")]
    InvalidStep { index: usize },
}

/// How one consecutive pair of a trace is justified.
fn classify_step<C: Construction>(
    c: &C,
    from: &Config<C::State, C::Site>,
    to: &Config<C::State, C::Site>,
) -> Option<bool> {
    if c.successors(from).contains(to) {
        Some(true)
    } else if from.state == to.state && c.observe(from).is_some() && c.observe(to).is_some() {
        Some(false)
    } else {
        None
    }
}

/// The observable transition sequence of a trace.
///
/// Consecutive observable positions `i < j` contribute the symbol
/// `(port_i, s_i) -> (port_j, s_j)` when every step from `i` to `j` is a
/// transition (positions strictly between are unobservable by
/// construction); otherwise they contribute nothing.
pub fn observable_sequence<C: Construction>(
    c: &C,
    trace: &Trace<C::State, C::Site>,
) -> Result<Vec<Symbol>, TraceError> {
    let steps = &trace.steps;
    let first = steps.first().ok_or(TraceError::Empty)?;
    if first.state != c.start() {
        return Err(TraceError::WrongStart);
    }
    let mut in_delta = Vec::with_capacity(steps.len().saturating_sub(1));
    for (i, pair) in steps.windows(2).enumerate() {
        match classify_step(c, &pair[0], &pair[1]) {
            Some(d) => in_delta.push(d),
            None => return Err(TraceError::InvalidStep { index: i + 1 }),
        }
    }
    let ports = c.ports();
    let framing = |pf: PortFraming| Framing::new(ports[pf.port].location.clone(), pf.agent);
    let observed: Vec<(usize, PortFraming)> = steps
        .iter()
        .enumerate()
        .filter_map(|(i, cfg)| c.observe(cfg).map(|pf| (i, pf)))
        .collect();
    let mut word = Vec::new();
    for pair in observed.windows(2) {
        let (i, a) = pair[0];
        let (j, b) = pair[1];
        if in_delta[i..j].iter().all(|&d| d) {
            word.push(Symbol::new(framing(a), framing(b)));
        }
    }
    Ok(word)
}
