use std::collections::{HashMap, VecDeque};
use std::fmt;

use super::grid::{BlockSet, Direction, Push1Grid};
use super::rules::shove;

/// One move of a solution: a plain step, or a step that pushes a block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverMove {
    pub dir: Direction,
    pub pushed: bool,
}

impl fmt::Display for SolverMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.dir.letter();
        if self.pushed {
            write!(f, "{c}")
        } else {
            write!(f, "{}", c.to_ascii_lowercase())
        }
    }
}

/// Renders a solution in LURD notation: lowercase steps, uppercase pushes.
pub fn format_moves(moves: &[SolverMove]) -> String {
    moves.iter().map(ToString::to_string).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("cell ({0},{1}) is not a floor cell")]
    NotFloor(usize, usize),
    #[error("the agent starts on a block at ({0},{1})")]
    StartOnBlock(usize, usize),
    #[error("search budget of {limit} configurations exceeded")]
    Budget { limit: usize },
}

/// Shortest move sequence taking the agent from `start` to `goal` under
/// Push-1 rules, or `None` if the goal is unreachable.
///
/// Ports play no part here: door cells are ordinary floor and nothing
/// leaves the grid. Blocks may be pushed over the goal cell.
pub fn solve_reachability(
    grid: &Push1Grid,
    start: (usize, usize),
    goal: (usize, usize),
    budget: usize,
) -> Result<Option<Vec<SolverMove>>, SolveError> {
    for (x, y) in [start, goal] {
        if x >= grid.width() || y >= grid.height() || !grid.is_floor(grid.index(x, y)) {
            return Err(SolveError::NotFloor(x, y));
        }
    }
    let from = grid.index(start.0, start.1);
    let target = grid.index(goal.0, goal.1);
    if grid.initial_blocks().contains(from) {
        return Err(SolveError::StartOnBlock(start.0, start.1));
    }
    if from == target {
        return Ok(Some(Vec::new()));
    }
    type Node = (usize, BlockSet);
    let root: Node = (from, grid.initial_blocks().clone());
    let mut parent: HashMap<Node, Option<(Node, SolverMove)>> = HashMap::new();
    parent.insert(root.clone(), None);
    let mut queue = VecDeque::from([root]);
    let mut explored = 0usize;
    while let Some(node) = queue.pop_front() {
        explored += 1;
        if explored > budget {
            return Err(SolveError::Budget { limit: budget });
        }
        let (agent, blocks) = &node;
        for dir in Direction::ALL {
            let Some((to, pushed)) = shove(grid, blocks, *agent, dir) else {
                continue;
            };
            let mut next_blocks = blocks.clone();
            if let Some(b) = pushed {
                next_blocks.remove(to);
                next_blocks.insert(b);
            }
            let next = (to, next_blocks);
            if parent.contains_key(&next) {
                continue;
            }
            let mv = SolverMove {
                dir,
                pushed: pushed.is_some(),
            };
            parent.insert(next.clone(), Some((node.clone(), mv)));
            if to == target {
                let mut path = Vec::new();
                let mut at = next;
                while let Some(Some((prev, mv))) = parent.get(&at) {
                    path.push(*mv);
                    at = prev.clone();
                }
                path.reverse();
                return Ok(Some(path));
            }
            queue.push_back(next);
        }
    }
    Ok(None)
}
