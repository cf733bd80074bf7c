//! Line-oriented gadget text format.
//!
//! ```text
//! # self-closing door
//! states: open closed
//! start: open
//! locations: entrance exit keyhole
//! open (entrance,step) -> closed (exit,step)
//! closed (keyhole,step) -> open (keyhole,step)
//! ```

use std::fmt::Write as _;

use super::{Framing, Gadget, GadgetTransition, Location, ParseError};

fn side(text: &str, line: usize, column: usize) -> Result<(String, Framing), ParseError> {
    let text = text.trim();
    let (state, framing) = text.split_once(char::is_whitespace).ok_or_else(|| {
        ParseError::new(
            line,
            column,
            format!("expected `state (location,agent)`, got `{text}`"),
        )
    })?;
    let framing: Framing = framing
        .trim()
        .parse()
        .map_err(|e: super::ModelError| ParseError::new(line, column, e.to_string()))?;
    Ok((state.to_owned(), framing))
}

/// Parses a gadget. Structural checks only; call [`Gadget::validate`] for
/// the semantic invariants.
pub fn parse_gadget(text: &str) -> Result<Gadget, ParseError> {
    let mut states = None;
    let mut start = None;
    let mut locations = None;
    let mut transitions = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len() + 1;
        let content = content.trim();
        let header = content
            .split_once(':')
            .filter(|(key, _)| matches!(key.trim(), "states" | "start" | "locations"));
        if let Some((key, value)) = header {
            let words: Vec<String> = value.split_whitespace().map(str::to_owned).collect();
            let slot = match key.trim() {
                "states" => &mut states,
                "locations" => &mut locations,
                _ => {
                    if words.len() != 1 {
                        return Err(ParseError::new(
                            line_no,
                            indent,
                            "`start:` takes exactly one state",
                        ));
                    }
                    if start.replace(words[0].clone()).is_some() {
                        return Err(ParseError::new(line_no, indent, "`start:` given twice"));
                    }
                    continue;
                }
            };
            if slot.replace(words).is_some() {
                return Err(ParseError::new(
                    line_no,
                    indent,
                    format!("`{}:` given twice", key.trim()),
                ));
            }
            continue;
        }
        let arrow = content.find("->").ok_or_else(|| {
            ParseError::new(line_no, indent, format!("unrecognised line `{content}`"))
        })?;
        let (from, entry) = side(&content[..arrow], line_no, indent)?;
        let (to, exit) = side(&content[arrow + 2..], line_no, indent + arrow + 2)?;
        transitions.push(GadgetTransition::new(from, entry, to, exit));
    }
    let states = states.ok_or_else(|| ParseError::new(1, 1, "missing `states:` line"))?;
    let start = start.ok_or_else(|| ParseError::new(1, 1, "missing `start:` line"))?;
    let locations: Vec<Location> = locations
        .ok_or_else(|| ParseError::new(1, 1, "missing `locations:` line"))?
        .into_iter()
        .map(Location::from)
        .collect();
    Ok(Gadget {
        states,
        start,
        locations,
        transitions,
    })
}

/// Writes a gadget in the text format, preceded by `header` comment lines.
pub fn write_gadget(g: &Gadget, header: &[String]) -> String {
    let mut out = String::new();
    for h in header {
        let _ = writeln!(out, "# {h}");
    }
    let _ = writeln!(out, "states: {}", g.states.join(" "));
    let _ = writeln!(out, "start: {}", g.start);
    let locs: Vec<&str> = g.locations.iter().map(Location::as_str).collect();
    let _ = writeln!(out, "locations: {}", locs.join(" "));
    for t in &g.transitions {
        let _ = writeln!(out, "{t}");
    }
    out
}
