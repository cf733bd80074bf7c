//! Grid file format.
//!
//! ```text
//! port A out=west block_in=no block_out=no
//! port B out=east block_in=no block_out=no
//!
//! ###
//! A.B
//! ###
//! ```
//!
//! Cells: `#` wall, `.` floor, `b` block, an uppercase letter is the door
//! cell of the port declared with that letter, `@` agent start and `G`
//! goal (solver levels). A `G` is a port only when a `port G` header
//! exists. Spaces and short rows read as wall.

use std::collections::HashMap;

use super::grid::{Direction, GridError, GridPort, Push1Grid};
use crate::model::{Location, ParseError};

struct Header {
    port: GridPort,
    line: usize,
}

fn yes_no(value: &str, line: usize, column: usize) -> Result<bool, ParseError> {
    match value {
        "yes" => Ok(true),
        "no" => Ok(false),
        other => Err(ParseError::new(
            line,
            column,
            format!("expected `yes` or `no`, got `{other}`"),
        )),
    }
}

fn parse_header(text: &str, line: usize) -> Result<Header, ParseError> {
    let mut words = text.split_whitespace();
    words.next();
    let label = words
        .next()
        .ok_or_else(|| ParseError::new(line, 1, "`port` needs a letter"))?;
    let mut chars = label.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) if c.is_ascii_uppercase() => {}
        _ => {
            return Err(ParseError::new(
                line,
                6,
                format!("port label must be one uppercase letter, got `{label}`"),
            ))
        }
    }
    let mut outward = None;
    let mut block_in = false;
    let mut block_out = false;
    for word in words {
        let column = text.find(word).map_or(1, |c| c + 1);
        let (key, value) = word.split_once('=').ok_or_else(|| {
            ParseError::new(line, column, format!("expected `key=value`, got `{word}`"))
        })?;
        match key {
            "out" => {
                outward = Some(Direction::parse(value).ok_or_else(|| {
                    ParseError::new(line, column, format!("unknown direction `{value}`"))
                })?)
            }
            "block_in" => block_in = yes_no(value, line, column)?,
            "block_out" => block_out = yes_no(value, line, column)?,
            other => {
                return Err(ParseError::new(
                    line,
                    column,
                    format!("unknown port option `{other}`"),
                ))
            }
        }
    }
    let outward = outward
        .ok_or_else(|| ParseError::new(line, 1, format!("port {label} needs `out=<direction>`")))?;
    Ok(Header {
        port: GridPort {
            label: Location::from(label),
            door: (0, 0),
            outward,
            block_in,
            block_out,
        },
        line,
    })
}

impl Push1Grid {
    /// Parses the grid file format, checking every grid invariant.
    pub fn parse(text: &str) -> Result<Push1Grid, ParseError> {
        let lines: Vec<&str> = text.lines().collect();
        let mut headers: HashMap<char, Header> = HashMap::new();
        let mut i = 0;
        while i < lines.len() {
            let trimmed = lines[i].trim();
            if trimmed.is_empty() {
                i += 1;
                continue;
            }
            if !(trimmed == "port" || trimmed.starts_with("port ")) {
                break;
            }
            let h = parse_header(trimmed, i + 1)?;
            let letter = h.port.label.as_str().chars().next().unwrap_or('?');
            if headers.contains_key(&letter) {
                return Err(ParseError::new(
                    i + 1,
                    1,
                    format!("duplicate port letter {letter}"),
                ));
            }
            headers.insert(letter, h);
            i += 1;
        }
        let first_row = i;
        let mut rows: Vec<&str> = lines[first_row..].to_vec();
        while rows.last().is_some_and(|r| r.trim().is_empty()) {
            rows.pop();
        }
        if rows.is_empty() {
            return Err(ParseError::new(lines.len().max(1), 1, "no grid rows"));
        }

        let mut floor_rows = Vec::with_capacity(rows.len());
        let mut blocks = Vec::new();
        let mut doors: HashMap<char, (usize, usize)> = HashMap::new();
        let mut agent = None;
        let mut goal = None;
        let mut positions: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        for (y, row) in rows.iter().enumerate() {
            let line = first_row + y + 1;
            if row.trim().is_empty() {
                return Err(ParseError::new(line, 1, "blank line inside the grid"));
            }
            let mut floor = Vec::new();
            for (x, c) in row.chars().enumerate() {
                let column = x + 1;
                positions.insert((x, y), (line, column));
                let is_floor = match c {
                    '#' | ' ' => false,
                    '.' => true,
                    'b' => {
                        blocks.push((x, y));
                        true
                    }
                    '@' => {
                        if agent.replace((x, y)).is_some() {
                            return Err(ParseError::new(line, column, "more than one `@`"));
                        }
                        true
                    }
                    'G' if !headers.contains_key(&'G') => {
                        if goal.replace((x, y)).is_some() {
                            return Err(ParseError::new(line, column, "more than one `G`"));
                        }
                        true
                    }
                    c if c.is_ascii_uppercase() => {
                        if !headers.contains_key(&c) {
                            return Err(ParseError::new(
                                line,
                                column,
                                format!("port letter {c} has no `port {c}` header"),
                            ));
                        }
                        if doors.insert(c, (x, y)).is_some() {
                            return Err(ParseError::new(
                                line,
                                column,
                                format!("duplicate port letter {c}"),
                            ));
                        }
                        true
                    }
                    other => {
                        return Err(ParseError::new(
                            line,
                            column,
                            format!("unexpected character `{other}`"),
                        ));
                    }
                };
                floor.push(is_floor);
            }
            floor_rows.push(floor);
        }

        let mut ports = Vec::new();
        let mut door_lines: HashMap<Location, (usize, usize)> = HashMap::new();
        let mut letters: Vec<char> = headers.keys().copied().collect();
        letters.sort();
        for letter in letters {
            let h = &headers[&letter];
            let Some(&door) = doors.get(&letter) else {
                return Err(ParseError::new(
                    h.line,
                    1,
                    format!("port {letter} does not appear in the grid"),
                ));
            };
            door_lines.insert(h.port.label.clone(), positions[&door]);
            ports.push(GridPort {
                door,
                ..h.port.clone()
            });
        }
        let mut grid = Push1Grid::new(floor_rows, blocks, ports).map_err(|e| {
            let (line, column) = match &e {
                GridError::DoorNotOnBoundary(l)
                | GridError::BlockBeyondDoor(l)
                | GridError::DoorOffFloor(l)
                | GridError::BlockOnDoor(l) => door_lines.get(l).copied().unwrap_or((1, 1)),
                _ => (1, 1),
            };
            ParseError::new(line, column, e.to_string())
        })?;
        grid.agent_start = agent;
        grid.goal = goal;
        Ok(grid)
    }
}
