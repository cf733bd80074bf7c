//! Push-1: a grid of walls, floor and identical blocks in which the agent
//! may push a single block at a time. A grid with ports is a construction;
//! a grid with `@` and `G` markers is a reachability level.
//!
//! Port framing convention. Each port has a door cell inside the grid on
//! its boundary and a virtual exterior cell one step outward.
//!
//! * `(port, step)`: the agent stands on the door cell. This is always
//!   observable, so a block pushed in from outside yields
//!   `(port,push)->(port,step)` before any further traversal.
//! * exit `(port, push)`: the agent has pushed a block from the door cell
//!   to the exterior cell and stands on the door cell; the block belongs
//!   to the environment from then on.
//! * entry `(port, push)`: the agent stands on the exterior cell with a
//!   block on the (empty) door cell; its only move pushes that block one
//!   cell inward, leaving the agent on the door cell.
//!
//! When two ports sit face to face the exterior cell of one is the door
//! cell of the other, so one side's exit framing is the other side's entry
//! framing.

mod grid;
mod parse;
mod rules;
mod solver;

pub use grid::{BlockSet, Direction, GridError, GridPort, Push1Grid};
pub use rules::{GridSite, Move, MoveError, MoveKind, Push1Config};
pub use solver::{format_moves, solve_reachability, SolveError, SolverMove};
