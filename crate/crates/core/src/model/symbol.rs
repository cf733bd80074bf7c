use std::fmt;
use std::str::FromStr;

use super::ModelError;

/// What the agent is doing as it crosses a location: walking freely or
/// carrying a block along with it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AgentState {
    Step,
    Push,
}

impl AgentState {
    pub const ALL: [AgentState; 2] = [AgentState::Step, AgentState::Push];

    /// The agent state every trace starts in.
    pub const INITIAL: AgentState = AgentState::Step;

    pub fn keyword(self) -> &'static str {
        match self {
            AgentState::Step => "step",
            AgentState::Push => "push",
        }
    }

    /// Box glyph used in diagrams: `□` for step, `■` for push.
    pub fn glyph(self) -> char {
        match self {
            AgentState::Step => '□',
            AgentState::Push => '■',
        }
    }
}

impl fmt::Display for AgentState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

impl FromStr for AgentState {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "step" => Ok(AgentState::Step),
            "push" => Ok(AgentState::Push),
            other => Err(ModelError::Syntax(format!(
                "unknown agent state `{other}` (expected `step` or `push`)"
            ))),
        }
    }
}

/// Opaque location label: a port letter, a gadget location name, or a
/// composite port name.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Location(String);

impl Location {
    pub fn new(label: impl Into<String>) -> Self {
        Location(label.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Location {
    fn from(s: &str) -> Self {
        Location(s.to_owned())
    }
}

impl From<String> for Location {
    fn from(s: String) -> Self {
        Location(s)
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A location together with the agent state at that location.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Framing {
    pub location: Location,
    pub agent: AgentState,
}

impl Framing {
    pub fn new(location: impl Into<Location>, agent: AgentState) -> Self {
        Framing {
            location: location.into(),
            agent,
        }
    }

    pub fn step(location: impl Into<Location>) -> Self {
        Framing::new(location, AgentState::Step)
    }

    pub fn push(location: impl Into<Location>) -> Self {
        Framing::new(location, AgentState::Push)
    }

    /// Diagram form, e.g. `(A,□)`.
    pub fn glyphs(&self) -> String {
        format!("({},{})", self.location, self.agent.glyph())
    }
}

impl fmt::Display for Framing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.location, self.agent)
    }
}

impl FromStr for Framing {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| ModelError::Syntax(format!("expected `(location,state)`, got `{s}`")))?;
        let (loc, agent) = inner
            .split_once(',')
            .ok_or_else(|| ModelError::Syntax(format!("expected `(location,state)`, got `{s}`")))?;
        let loc = loc.trim();
        if loc.is_empty() {
            return Err(ModelError::Syntax(format!("empty location in `{s}`")));
        }
        Ok(Framing::new(loc, agent.trim().parse()?))
    }
}

/// One letter of the observable alphabet: the agent enters at one framing
/// and leaves at another.
///
/// The derived ordering (entry location, entry state, exit location, exit
/// state) is the canonical symbol order used throughout the crate.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    pub entry: Framing,
    pub exit: Framing,
}

impl Symbol {
    pub fn new(entry: Framing, exit: Framing) -> Self {
        Symbol { entry, exit }
    }

    /// Shorthand for a step-in, step-out traversal.
    pub fn walk(from: &str, to: &str) -> Self {
        Symbol::new(Framing::step(from), Framing::step(to))
    }

    pub fn glyphs(&self) -> String {
        format!("{}→{}", self.entry.glyphs(), self.exit.glyphs())
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.entry, self.exit)
    }
}

impl FromStr for Symbol {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (entry, exit) = s
            .split_once("->")
            .ok_or_else(|| ModelError::Syntax(format!("expected `(l,s)->(l,s)`, got `{s}`")))?;
        Ok(Symbol::new(entry.parse()?, exit.parse()?))
    }
}

/// Every symbol over the given locations, in canonical order.
pub fn full_alphabet<'a>(locations: impl IntoIterator<Item = &'a Location>) -> Vec<Symbol> {
    let mut locs: Vec<&Location> = locations.into_iter().collect();
    locs.sort();
    locs.dedup();
    let framings: Vec<Framing> = locs
        .iter()
        .flat_map(|l| {
            AgentState::ALL
                .iter()
                .map(move |&a| Framing::new((*l).clone(), a))
        })
        .collect();
    let mut out = Vec::with_capacity(framings.len() * framings.len());
    for entry in &framings {
        for exit in &framings {
            out.push(Symbol::new(entry.clone(), exit.clone()));
        }
    }
    out
}
