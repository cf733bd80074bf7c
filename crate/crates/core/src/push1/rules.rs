use super::grid::{BlockSet, Direction, Push1Grid};
use crate::model::{AgentState, Config, Construction, PortFraming, PortSpec};

/// Where the agent is: an ordinary cell, or a port framing.
///
/// `Door(k)` with [`AgentState::Step`] is the agent standing on port `k`'s
/// door cell. `Door(k)` with [`AgentState::Push`] is the block framing of
/// port `k`: either the agent has just pushed a block out through the
/// door (and stands on the door cell), or it waits just outside with a
/// block on the door cell, ready to push it in. The block outside is never
/// part of the block set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GridSite {
    Cell(u32),
    Door(u32),
}

pub type Push1Config = Config<BlockSet, GridSite>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveKind {
    Step,
    Push,
    /// Leaving through a door without a block.
    ExitStep,
    /// Pushing a block from a door cell out of the grid.
    ExitPush,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Move {
    pub dir: Direction,
    pub kind: MoveKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MoveError {
    #[error("move {0:?} is not legal in this configuration")]
    Illegal(Move),
}

/// What a plain move from `from` in `dir` does, ignoring ports: `Some((to,
/// pushed_to))` where `pushed_to` is the block's new cell if one moves.
pub(crate) fn shove(
    grid: &Push1Grid,
    blocks: &BlockSet,
    from: usize,
    dir: Direction,
) -> Option<(usize, Option<usize>)> {
    let next = grid.floor_neighbor(from, dir)?;
    if !blocks.contains(next) {
        return Some((next, None));
    }
    // A second block, a wall, or the edge beyond stops the push: only one
    // block moves at a time.
    let beyond = grid.floor_neighbor(next, dir)?;
    (!blocks.contains(beyond)).then_some((next, Some(beyond)))
}

impl Push1Grid {
    fn site_at(&self, cell: usize) -> GridSite {
        match self.port_at(cell) {
            Some(k) => GridSite::Door(k as u32),
            None => GridSite::Cell(cell as u32),
        }
    }

    /// Cell the agent occupies, or `None` when it waits outside a door.
    pub fn agent_cell(&self, cfg: &Push1Config) -> Option<usize> {
        match (cfg.site, cfg.agent) {
            (GridSite::Cell(c), _) => Some(c as usize),
            (GridSite::Door(k), AgentState::Step) => Some(self.door_cell(k as usize)),
            (GridSite::Door(_), AgentState::Push) => None,
        }
    }

    fn outcome(&self, cfg: &Push1Config, dir: Direction) -> Option<(MoveKind, Push1Config)> {
        let blocks = &cfg.state;
        match (cfg.site, cfg.agent) {
            (GridSite::Door(k), AgentState::Push) => {
                // Waiting outside with a block on the door cell: the only
                // continuation pushes it one cell inward.
                let port = &self.grid_ports()[k as usize];
                let door = self.door_cell(k as usize);
                if dir != port.outward.opposite() || !port.block_in || blocks.contains(door) {
                    return None;
                }
                let inner = self
                    .floor_neighbor(door, dir)
                    .filter(|&c| !blocks.contains(c))?;
                let mut next = blocks.clone();
                next.insert(inner);
                Some((
                    MoveKind::Push,
                    Config::new(next, cfg.site, AgentState::Step),
                ))
            }
            (GridSite::Cell(_), AgentState::Push) => None,
            (_, AgentState::Step) => {
                let from = self.agent_cell(cfg)?;
                if let Some((to, pushed)) = shove(self, blocks, from, dir) {
                    let site = self.site_at(to);
                    return Some(match pushed {
                        None => (
                            MoveKind::Step,
                            Config::new(blocks.clone(), site, AgentState::Step),
                        ),
                        Some(b) => {
                            let mut next = blocks.clone();
                            next.remove(to);
                            next.insert(b);
                            (MoveKind::Push, Config::new(next, site, AgentState::Step))
                        }
                    });
                }
                if let GridSite::Door(k) = cfg.site {
                    if self.grid_ports()[k as usize].outward == dir {
                        return Some((MoveKind::ExitStep, cfg.clone()));
                    }
                }
                // Pushing a block off a door cell out of the grid.
                let next = self
                    .floor_neighbor(from, dir)
                    .filter(|&n| blocks.contains(n))?;
                let k = self.port_at(next)?;
                let port = &self.grid_ports()[k];
                if port.outward != dir || !port.block_out {
                    return None;
                }
                let mut remaining = blocks.clone();
                remaining.remove(next);
                Some((
                    MoveKind::ExitPush,
                    Config::new(remaining, GridSite::Door(k as u32), AgentState::Push),
                ))
            }
        }
    }

    /// Every legal move, in [`Direction::ALL`] order.
    pub fn legal_moves(&self, cfg: &Push1Config) -> Vec<Move> {
        Direction::ALL
            .iter()
            .filter_map(|&dir| self.outcome(cfg, dir).map(|(kind, _)| Move { dir, kind }))
            .collect()
    }

    pub fn apply_move(&self, cfg: &Push1Config, mv: Move) -> Result<Push1Config, MoveError> {
        match self.outcome(cfg, mv.dir) {
            Some((kind, next)) if kind == mv.kind => Ok(next),
            _ => Err(MoveError::Illegal(mv)),
        }
    }

    /// Configuration with the agent on an ordinary interior cell.
    pub fn config_at(&self, blocks: BlockSet, x: usize, y: usize) -> Push1Config {
        Config::new(blocks, self.site_at(self.index(x, y)), AgentState::Step)
    }
}

impl Construction for Push1Grid {
    type State = BlockSet;
    type Site = GridSite;

    fn start(&self) -> BlockSet {
        self.initial_blocks().clone()
    }

    fn ports(&self) -> Vec<PortSpec> {
        self.grid_ports()
            .iter()
            .map(|p| PortSpec {
                location: p.label.clone(),
                block_in: p.block_in,
                block_out: p.block_out,
                axis: Some(p.outward.axis()),
            })
            .collect()
    }

    fn successors(&self, cfg: &Push1Config) -> Vec<Push1Config> {
        Direction::ALL
            .iter()
            .filter_map(|&dir| self.outcome(cfg, dir).map(|(_, next)| next))
            .collect()
    }

    fn observe(&self, cfg: &Push1Config) -> Option<PortFraming> {
        match cfg.site {
            GridSite::Door(k) => Some(PortFraming::new(k as usize, cfg.agent)),
            GridSite::Cell(_) => None,
        }
    }

    fn enter(&self, state: &BlockSet, at: PortFraming) -> Option<Push1Config> {
        let port = self.grid_ports().get(at.port)?;
        if state.contains(self.door_cell(at.port)) {
            return None;
        }
        if at.agent == AgentState::Push && !port.block_in {
            return None;
        }
        Some(Config::new(
            state.clone(),
            GridSite::Door(at.port as u32),
            at.agent,
        ))
    }

    fn describe_state(&self, state: &BlockSet) -> String {
        let cells: Vec<String> = state
            .iter()
            .map(|c| {
                let (x, y) = self.coords(c);
                format!("{x},{y}")
            })
            .collect();
        format!("blocks[{}]", cells.join(" "))
    }
}
