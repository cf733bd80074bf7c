//! Reference gadgets and grids used by tests, examples and the acceptance
//! suite.
//!
//! Hand-written specs list every transition; nothing is implied. The wire
//! and the dicrumbler include trivial loops because the grids realizing
//! them physically permit waiting at a door. The door, toggle and diode are
//! abstract and carry no trivial loops.

use crate::model::{Framing, Gadget, GadgetTransition};

/// 1x3 hallway between two block-free ports.
pub const HALL_GRID: &str = "\
port A out=west block_in=no block_out=no
port B out=east block_in=no block_out=no

###
A.B
###
";

/// 1x4 hallway: blocks may come in at A and leave at B.
pub const BLOCK_TRANSIT_HALL: &str = "\
port A out=west block_in=yes block_out=no
port B out=east block_in=no block_out=yes

####
A.bB
####
";

/// A solver level: agent `@`, goal `G`, and a couple of blocks to move.
pub const FIGURE_STYLE_LEVEL: &str = "\
#######
#@.b..#
#.bb#.#
#...bG#
#######
";

pub const DOOR_GADGET: &str = "\
# The door starts open. Walking through closes it; visiting the keyhole
# opens it again.
states: open closed
start: open
locations: entrance exit keyhole
open (entrance,step) -> closed (exit,step)
closed (keyhole,step) -> open (keyhole,step)
";

/// Placeholder for a Push-1 dicrumbler. It is currently a plain hallway.
///
/// No layout realizing the dicrumbler under these movement rules has been
/// found yet. Every single-block gate tried can be undone by pushing the
/// same block from the other side, so this grid does not verify against
/// [`dicrumbler()`] and the matching acceptance criterion fails.
pub const DICRUMBLER_GRID: &str = include_str!("fixtures/dicrumbler.grid");

fn step(l: &str) -> Framing {
    Framing::step(l)
}

fn t(from: &str, entry: &str, to: &str, exit: &str) -> GadgetTransition {
    GadgetTransition::new(from, step(entry), to, step(exit))
}

pub fn self_closing_door() -> Gadget {
    Gadget::new(
        ["open", "closed"],
        "open",
        ["entrance", "exit", "keyhole"],
        [
            t("open", "entrance", "closed", "exit"),
            t("closed", "keyhole", "open", "keyhole"),
        ],
    )
}

/// The synthesized form of [`HALL_GRID`]: one state, every walk allowed.
pub fn wire() -> Gadget {
    Gadget::new(
        ["S0"],
        "S0",
        ["A", "B"],
        [
            t("S0", "A", "S0", "A"),
            t("S0", "A", "S0", "B"),
            t("S0", "B", "S0", "A"),
            t("S0", "B", "S0", "B"),
        ],
    )
}

/// Enter A and leave B exactly once; afterwards only trivial waiting.
pub fn dicrumbler() -> Gadget {
    Gadget::new(
        ["fresh", "spent"],
        "fresh",
        ["A", "B"],
        [
            t("fresh", "A", "fresh", "A"),
            t("fresh", "A", "spent", "B"),
            t("fresh", "B", "fresh", "B"),
            t("spent", "A", "spent", "A"),
            t("spent", "B", "spent", "B"),
        ],
    )
}

/// A 1-toggle: the two states are the two parities.
pub fn one_toggle() -> Gadget {
    Gadget::new(
        ["ab", "ba"],
        "ab",
        ["A", "B"],
        [t("ab", "A", "ba", "B"), t("ba", "B", "ab", "A")],
    )
}

/// A diode A to B with a check-path I to O. Pushing back in at B breaks it
/// for good.
pub fn toy_checkable_diode() -> Gadget {
    Gadget::new(
        ["fresh", "broken", "checked"],
        "fresh",
        ["A", "B", "I", "O"],
        [
            t("fresh", "A", "fresh", "B"),
            t("fresh", "B", "broken", "A"),
            t("broken", "A", "broken", "B"),
            t("broken", "B", "broken", "A"),
            t("fresh", "I", "checked", "O"),
        ],
    )
}

/// Every hand-written gadget fixture.
pub fn all_gadgets() -> Vec<Gadget> {
    vec![
        wire(),
        dicrumbler(),
        self_closing_door(),
        toy_checkable_diode(),
        one_toggle(),
    ]
}
