use std::fmt;

use crate::model::{Axis, Location};

/// Cardinal direction on the grid; `y` grows downward.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    North,
    South,
    West,
    East,
}

impl Direction {
    /// Expansion order for searches.
    pub const ALL: [Direction; 4] = [
        Direction::North,
        Direction::South,
        Direction::West,
        Direction::East,
    ];

    pub fn delta(self) -> (isize, isize) {
        match self {
            Direction::North => (0, -1),
            Direction::South => (0, 1),
            Direction::West => (-1, 0),
            Direction::East => (1, 0),
        }
    }

    pub fn opposite(self) -> Direction {
        match self {
            Direction::North => Direction::South,
            Direction::South => Direction::North,
            Direction::West => Direction::East,
            Direction::East => Direction::West,
        }
    }

    pub fn axis(self) -> Axis {
        match self {
            Direction::North | Direction::South => Axis::Vertical,
            Direction::West | Direction::East => Axis::Horizontal,
        }
    }

    /// `U`, `D`, `L` or `R`.
    pub fn letter(self) -> char {
        match self {
            Direction::North => 'U',
            Direction::South => 'D',
            Direction::West => 'L',
            Direction::East => 'R',
        }
    }

    pub fn parse(word: &str) -> Option<Direction> {
        match word {
            "north" => Some(Direction::North),
            "south" => Some(Direction::South),
            "west" => Some(Direction::West),
            "east" => Some(Direction::East),
            _ => None,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::North => "north",
            Direction::South => "south",
            Direction::West => "west",
            Direction::East => "east",
        })
    }
}

/// Set of cells holding blocks, as a bitset over cell indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockSet(Box<[u64]>);

impl BlockSet {
    pub fn empty(cells: usize) -> Self {
        BlockSet(vec![0; cells.div_ceil(64)].into_boxed_slice())
    }

    pub fn contains(&self, cell: usize) -> bool {
        self.0[cell / 64] >> (cell % 64) & 1 == 1
    }

    pub fn insert(&mut self, cell: usize) {
        self.0[cell / 64] |= 1 << (cell % 64);
    }

    pub fn remove(&mut self, cell: usize) {
        self.0[cell / 64] &= !(1 << (cell % 64));
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &w)| {
            (0..64)
                .filter(move |b| w >> b & 1 == 1)
                .map(move |b| i * 64 + b)
        })
    }
}

impl fmt::Debug for BlockSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A port of a grid: its door cell, which way is out, and whether blocks
/// may be pushed in or out through it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridPort {
    pub label: Location,
    pub door: (usize, usize),
    pub outward: Direction,
    pub block_in: bool,
    pub block_out: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GridError {
    #[error("cell ({0},{1}) is outside the grid")]
    OutOfBounds(usize, usize),
    #[error("block at ({0},{1}) is not on a floor cell")]
    BlockOffFloor(usize, usize),
    #[error("door of port {0} is not a floor cell")]
    DoorOffFloor(Location),
    #[error(
        "door of port {0} has a floor cell beyond it; doors must face out of the floor region"
    )]
    DoorNotOnBoundary(Location),
    #[error("block on the outward neighbour of door {0}")]
    BlockBeyondDoor(Location),
    #[error("port {0} declared twice")]
    DuplicatePort(Location),
    #[error("ports {0} and {1} share a door cell")]
    SharedDoor(Location, Location),
    #[error("block on door cell of port {0}")]
    BlockOnDoor(Location),
}

/// A square-grid Push-1 world: walls, floor, blocks and oriented ports.
///
/// All blocks are identical. Blocks that can never move (a 2×2 square,
/// say) are ordinary blocks; their immobility is a consequence of the
/// rules, not a cell kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Push1Grid {
    width: usize,
    height: usize,
    floor: Vec<bool>,
    initial_blocks: BlockSet,
    ports: Vec<GridPort>,
    door_of: Vec<Option<u32>>,
    pub(crate) agent_start: Option<(usize, usize)>,
    pub(crate) goal: Option<(usize, usize)>,
}

impl Push1Grid {
    /// Builds a grid from rows of floor flags, block cells and ports.
    pub fn new(
        floor_rows: Vec<Vec<bool>>,
        blocks: impl IntoIterator<Item = (usize, usize)>,
        mut ports: Vec<GridPort>,
    ) -> Result<Self, GridError> {
        let height = floor_rows.len();
        let width = floor_rows.iter().map(Vec::len).max().unwrap_or(0);
        let mut floor = vec![false; width * height];
        for (y, row) in floor_rows.iter().enumerate() {
            for (x, &f) in row.iter().enumerate() {
                floor[y * width + x] = f;
            }
        }
        let mut initial_blocks = BlockSet::empty(width * height);
        let mut grid = Push1Grid {
            width,
            height,
            floor,
            initial_blocks: BlockSet::empty(0),
            ports: Vec::new(),
            door_of: vec![None; width * height],
            agent_start: None,
            goal: None,
        };
        for (x, y) in blocks {
            let i = grid.checked_index(x, y)?;
            if !grid.floor[i] {
                return Err(GridError::BlockOffFloor(x, y));
            }
            initial_blocks.insert(i);
        }
        ports.sort_by(|a, b| a.label.cmp(&b.label));
        for w in ports.windows(2) {
            if w[0].label == w[1].label {
                return Err(GridError::DuplicatePort(w[0].label.clone()));
            }
        }
        for (k, p) in ports.iter().enumerate() {
            let d = grid.checked_index(p.door.0, p.door.1)?;
            if !grid.floor[d] {
                return Err(GridError::DoorOffFloor(p.label.clone()));
            }
            if initial_blocks.contains(d) {
                return Err(GridError::BlockOnDoor(p.label.clone()));
            }
            if let Some(beyond) = grid.neighbor(d, p.outward) {
                if initial_blocks.contains(beyond) {
                    return Err(GridError::BlockBeyondDoor(p.label.clone()));
                }
                if grid.floor[beyond] {
                    return Err(GridError::DoorNotOnBoundary(p.label.clone()));
                }
            }
            if let Some(other) = grid.door_of[d] {
                return Err(GridError::SharedDoor(
                    ports[other as usize].label.clone(),
                    p.label.clone(),
                ));
            }
            grid.door_of[d] = Some(k as u32);
        }
        grid.initial_blocks = initial_blocks;
        grid.ports = ports;
        Ok(grid)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn index(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }

    pub fn coords(&self, cell: usize) -> (usize, usize) {
        (cell % self.width, cell / self.width)
    }

    fn checked_index(&self, x: usize, y: usize) -> Result<usize, GridError> {
        if x < self.width && y < self.height {
            Ok(self.index(x, y))
        } else {
            Err(GridError::OutOfBounds(x, y))
        }
    }

    pub fn is_floor(&self, cell: usize) -> bool {
        self.floor[cell]
    }

    pub fn floor_count(&self) -> usize {
        self.floor.iter().filter(|&&f| f).count()
    }

    pub fn initial_blocks(&self) -> &BlockSet {
        &self.initial_blocks
    }

    pub fn grid_ports(&self) -> &[GridPort] {
        &self.ports
    }

    pub fn door_cell(&self, port: usize) -> usize {
        let (x, y) = self.ports[port].door;
        self.index(x, y)
    }

    pub fn port_at(&self, cell: usize) -> Option<usize> {
        self.door_of[cell].map(|k| k as usize)
    }

    pub fn agent_start(&self) -> Option<(usize, usize)> {
        self.agent_start
    }

    pub fn goal(&self) -> Option<(usize, usize)> {
        self.goal
    }

    /// The adjacent cell in `dir`, or `None` off the edge of the grid.
    pub fn neighbor(&self, cell: usize, dir: Direction) -> Option<usize> {
        let (x, y) = self.coords(cell);
        let (dx, dy) = dir.delta();
        let nx = x.checked_add_signed(dx)?;
        let ny = y.checked_add_signed(dy)?;
        (nx < self.width && ny < self.height).then(|| self.index(nx, ny))
    }

    /// The neighbor in `dir` if it is floor.
    pub fn floor_neighbor(&self, cell: usize, dir: Direction) -> Option<usize> {
        self.neighbor(cell, dir).filter(|&n| self.floor[n])
    }

    /// Renders the grid with the given block set, in the file alphabet.
    pub fn render(&self, blocks: &BlockSet) -> String {
        let mut out = String::new();
        for y in 0..self.height {
            for x in 0..self.width {
                let i = self.index(x, y);
                let c = if let Some(k) = self.door_of[i] {
                    self.ports[k as usize]
                        .label
                        .as_str()
                        .chars()
                        .next()
                        .unwrap_or('?')
                } else if !self.floor[i] {
                    '#'
                } else if blocks.contains(i) {
                    'b'
                } else {
                    '.'
                };
                out.push(c);
            }
            out.push('\n');
        }
        out
    }
}
