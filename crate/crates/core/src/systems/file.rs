//! System file format.
//!
//! ```text
//! use door = door.gdt
//! use hall = hall.grid
//! edge door.exit -- hall.A kind=free
//! expose door.entrance as IN
//! expose hall.B as OUT block_out=no
//! axis door.keyhole vertical
//! ```
//!
//! Paths are relative to the system file. `.gdt` is a gadget, `.grid` a
//! Push-1 grid and `.sys` a nested system. Edges default to `kind=free`.

use std::path::{Path, PathBuf};

use super::types::{Component, Edge, EdgeKind, Endpoint, Exposure, GadgetSystem, Instance};
use crate::model::{parse_gadget, Axis, Location, ParseError};
use crate::push1::Push1Grid;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UseLine {
    pub name: String,
    pub path: String,
    pub line: usize,
}

/// A parsed system file whose `use` lines are not yet resolved.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SystemFile {
    pub uses: Vec<UseLine>,
    pub edges: Vec<Edge>,
    pub exposed: Vec<Exposure>,
    pub axes: Vec<(Endpoint, Axis)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LoadError {
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("{path}: {error}")]
    Parse { path: PathBuf, error: ParseError },
    #[error("{path}: system includes itself")]
    Cycle { path: PathBuf },
}

fn endpoint(word: &str, line: usize, column: usize) -> Result<Endpoint, ParseError> {
    match word.split_once('.') {
        Some((inst, loc)) if !inst.is_empty() && !loc.is_empty() => Ok(Endpoint::new(inst, loc)),
        _ => Err(ParseError::new(
            line,
            column,
            format!("expected `instance.location`, got `{word}`"),
        )),
    }
}

fn yes_no(key: &str, value: &str, line: usize, column: usize) -> Result<bool, ParseError> {
    match value {
        "yes" => Ok(true),
        "no" => Ok(false),
        _ => Err(ParseError::new(
            line,
            column,
            format!("`{key}` must be `yes` or `no`, got `{value}`"),
        )),
    }
}

/// Parses a system file without touching the file system.
pub fn parse_system(text: &str) -> Result<SystemFile, ParseError> {
    let mut out = SystemFile::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        // Words with their 1-based columns.
        let words: Vec<(usize, &str)> = content
            .split_whitespace()
            .map(|w| (w.as_ptr() as usize - content.as_ptr() as usize + 1, w))
            .collect();
        let Some(&(col, keyword)) = words.first() else {
            continue;
        };
        let word = |k: usize| words.get(k).copied();
        let need = |k: usize, what: &str| {
            word(k)
                .ok_or_else(|| ParseError::new(line, raw.len().max(1), format!("missing {what}")))
        };
        match keyword {
            "use" => {
                let (c, name) = need(1, "instance name")?;
                let (ce, eq) = need(2, "`=`")?;
                if eq != "=" {
                    return Err(ParseError::new(
                        line,
                        ce,
                        format!("expected `=`, got `{eq}`"),
                    ));
                }
                let (_, path) = need(3, "path")?;
                if let Some((c, extra)) = word(4) {
                    return Err(ParseError::new(line, c, format!("unexpected `{extra}`")));
                }
                if !name
                    .chars()
                    .all(|ch| ch.is_alphanumeric() || ch == '_' || ch == '-')
                {
                    return Err(ParseError::new(
                        line,
                        c,
                        format!("bad instance name `{name}`"),
                    ));
                }
                out.uses.push(UseLine {
                    name: name.to_owned(),
                    path: path.to_owned(),
                    line,
                });
            }
            "edge" => {
                let (ca, a) = need(1, "first endpoint")?;
                let (cd, dash) = need(2, "`--`")?;
                if dash != "--" {
                    return Err(ParseError::new(
                        line,
                        cd,
                        format!("expected `--`, got `{dash}`"),
                    ));
                }
                let (cb, b) = need(3, "second endpoint")?;
                let mut kind = EdgeKind::Free;
                for &(c, opt) in &words[4..] {
                    kind = match opt {
                        "kind=free" => EdgeKind::Free,
                        "kind=block" => EdgeKind::Block,
                        _ => {
                            return Err(ParseError::new(
                                line,
                                c,
                                format!("unknown edge option `{opt}`"),
                            ))
                        }
                    };
                }
                out.edges.push(Edge::new(
                    endpoint(a, line, ca)?,
                    endpoint(b, line, cb)?,
                    kind,
                ));
            }
            "expose" => {
                let (ce, e) = need(1, "endpoint")?;
                let (ca, as_kw) = need(2, "`as`")?;
                if as_kw != "as" {
                    return Err(ParseError::new(
                        line,
                        ca,
                        format!("expected `as`, got `{as_kw}`"),
                    ));
                }
                let (_, label) = need(3, "label")?;
                let mut x = Exposure::new(endpoint(e, line, ce)?, Location::new(label));
                for &(c, opt) in &words[4..] {
                    match opt.split_once('=') {
                        Some(("block_in", v)) => x.block_in = Some(yes_no("block_in", v, line, c)?),
                        Some(("block_out", v)) => {
                            x.block_out = Some(yes_no("block_out", v, line, c)?)
                        }
                        _ => {
                            return Err(ParseError::new(
                                line,
                                c,
                                format!("unknown expose option `{opt}`"),
                            ))
                        }
                    }
                }
                out.exposed.push(x);
            }
            "axis" => {
                let (ce, e) = need(1, "endpoint")?;
                let (cx, axis) = need(2, "axis")?;
                let axis: Axis = axis.parse().map_err(|e: crate::model::ModelError| {
                    ParseError::new(line, cx, e.to_string())
                })?;
                if let Some((c, extra)) = word(3) {
                    return Err(ParseError::new(line, c, format!("unexpected `{extra}`")));
                }
                out.axes.push((endpoint(e, line, ce)?, axis));
            }
            other => {
                return Err(ParseError::new(
                    line,
                    col,
                    format!("unknown directive `{other}` (expected use, edge, expose or axis)"),
                ))
            }
        }
    }
    Ok(out)
}

fn read(path: &Path) -> Result<String, LoadError> {
    std::fs::read_to_string(path).map_err(|e| LoadError::Io {
        path: path.to_owned(),
        message: e.to_string(),
    })
}

fn parse_err(path: &Path, error: ParseError) -> LoadError {
    LoadError::Parse {
        path: path.to_owned(),
        error,
    }
}

fn load_component(path: &Path, stack: &mut Vec<PathBuf>) -> Result<Component, LoadError> {
    let text = read(path)?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("grid") => Push1Grid::parse(&text)
            .map(Component::Grid)
            .map_err(|e| parse_err(path, e)),
        Some("sys") => load_nested(path, &text, stack).map(|s| Component::System(Box::new(s))),
        _ => parse_gadget(&text)
            .map(Component::Gadget)
            .map_err(|e| parse_err(path, e)),
    }
}

fn load_nested(
    path: &Path,
    text: &str,
    stack: &mut Vec<PathBuf>,
) -> Result<GadgetSystem, LoadError> {
    let canonical = path.canonicalize().map_err(|e| LoadError::Io {
        path: path.to_owned(),
        message: e.to_string(),
    })?;
    if stack.contains(&canonical) {
        return Err(LoadError::Cycle {
            path: path.to_owned(),
        });
    }
    stack.push(canonical);
    let file = parse_system(text).map_err(|e| parse_err(path, e))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut instances = Vec::with_capacity(file.uses.len());
    for u in &file.uses {
        let component = load_component(&dir.join(&u.path), stack)?;
        instances.push(Instance::new(u.name.clone(), component));
    }
    stack.pop();
    Ok(GadgetSystem {
        instances,
        edges: file.edges,
        exposed: file.exposed,
        axes: file.axes,
    })
}

/// Reads a system file and everything it uses. The result is not yet
/// validated; see [`super::validate_system`].
pub fn load_system(path: &Path) -> Result<GadgetSystem, LoadError> {
    let text = read(path)?;
    load_nested(path, &text, &mut Vec::new())
}
