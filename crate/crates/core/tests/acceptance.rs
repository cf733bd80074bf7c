//! The acceptance suite: one line per criterion, with timings.
//!
//! Run with `cargo test --test acceptance`. Exits non-zero if any
//! criterion fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use gadgetcheck::automata::{accepts, equivalent, minimize, Nfa, Verdict};
use gadgetcheck::checkable::{infer_broken, post_select, CheckSpec};
use gadgetcheck::fixtures;
use gadgetcheck::model::Construction;
use gadgetcheck::model::{
    write_gadget, AgentState, Framing, Gadget, GadgetTransition, PortFraming, Symbol,
};
use gadgetcheck::push1::{format_moves, solve_reachability, Direction, MoveKind, Push1Grid};
use gadgetcheck::synthesis::{gadget_to_nfa, synthesize, verify_equivalence, ExploreOptions};
use gadgetcheck::systems::compose;
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("{what} took {elapsed:?}, limit {limit:?}")
    })
}

fn opts(threads: usize) -> ExploreOptions {
    ExploreOptions::with_threads(threads)
}

fn round_trip() -> Outcome {
    let mut slowest = Duration::ZERO;
    for g in fixtures::all_gadgets() {
        let t = Instant::now();
        let m = g.machine().map_err(|e| e.to_string())?;
        let s = synthesize(&m, &opts(0)).map_err(|e| e.to_string())?;
        let back = s.gadget.machine().map_err(|e| e.to_string())?;
        let v = verify_equivalence(&back, &g, &opts(0)).map_err(|e| e.to_string())?;
        ensure(v.is_equivalent(), || format!("{} fixture: {v:?}", g.start))?;
        let took = t.elapsed();
        within(took, Duration::from_secs(1), "one round trip")?;
        slowest = slowest.max(took);
    }
    Ok(format!(
        "{} fixtures, slowest {slowest:?}",
        fixtures::all_gadgets().len()
    ))
}

fn door_conformance() -> Outcome {
    let g = fixtures::self_closing_door();
    ensure(g.states.len() == 2, || format!("{} states", g.states.len()))?;
    ensure(g.locations.len() == 3, || {
        format!("{} locations", g.locations.len())
    })?;
    let nontrivial = g.transitions.iter().filter(|t| !t.is_trivial()).count();
    ensure(nontrivial == 2, || {
        format!("{nontrivial} non-trivial transitions")
    })?;
    let a = gadget_to_nfa(&g);
    let through = Symbol::walk("entrance", "exit");
    let key = Symbol::walk("keyhole", "keyhole");
    ensure(!accepts(&a, &[through.clone(), through.clone()]), || {
        "second traversal accepted".into()
    })?;
    ensure(accepts(&a, &[through.clone(), key, through]), || {
        "reopened traversal rejected".into()
    })?;
    Ok("2 states, 3 locations, self-closing".into())
}

fn minimization() -> Outcome {
    let mut r = common::rng(3);
    for i in 0..100 {
        let live = r.gen_range(1..=8);
        let sigma = r.gen_range(1..=4);
        let d = common::random_dfa(&mut r, live, sigma);
        let got = minimize(&d).live_count();
        let want = common::brute_force_classes(&d);
        ensure(got == want, || {
            format!("dfa #{i}: minimized to {got}, brute force says {want}")
        })?;
    }
    Ok("100 random DFAs".into())
}

fn random_nfa(r: &mut impl Rng, live: usize, sigma: usize) -> Nfa {
    let edges: Vec<(usize, usize, usize)> = (0..r.gen_range(0..=live * sigma * 2))
        .map(|_| {
            (
                r.gen_range(1..=live),
                r.gen_range(0..sigma),
                r.gen_range(1..=live),
            )
        })
        .collect();
    Nfa::new(common::symbols(sigma), live, 1, edges).unwrap()
}

fn witnesses() -> Outcome {
    let mut r = common::rng(4);
    let mut unequal = 0;
    for i in 0..50 {
        let sigma = r.gen_range(1..=3);
        let (la, lb) = (r.gen_range(1..=5), r.gen_range(1..=5));
        let a = random_nfa(&mut r, la, sigma);
        let b = random_nfa(&mut r, lb, sigma);
        if let Verdict::Unequal { witness, .. } = equivalent(&a, &b) {
            unequal += 1;
            ensure(accepts(&a, &witness) != accepts(&b, &witness), || {
                format!("pair #{i}: witness accepted by both or neither")
            })?;
        }
    }
    ensure(unequal > 0, || "no unequal pairs drawn".into())?;
    Ok(format!(
        "{unequal} of 50 pairs unequal, all witnesses one-sided"
    ))
}

fn push_rules() -> Outcome {
    let single = Push1Grid::parse("#####\n#.b.#\n#####\n").map_err(|e| e.to_string())?;
    let cfg = single.config_at(single.initial_blocks().clone(), 1, 1);
    ensure(
        single
            .legal_moves(&cfg)
            .iter()
            .any(|m| m.dir == Direction::East && m.kind == MoveKind::Push),
        || "agent, block, empty: no push".into(),
    )?;
    let double = Push1Grid::parse("######\n#.bb.#\n######\n").map_err(|e| e.to_string())?;
    let cfg = double.config_at(double.initial_blocks().clone(), 1, 1);
    ensure(
        !double
            .legal_moves(&cfg)
            .iter()
            .any(|m| m.dir == Direction::East),
        || "agent, block, block, empty: moved east".into(),
    )?;
    let hall = Push1Grid::parse(fixtures::BLOCK_TRANSIT_HALL).map_err(|e| e.to_string())?;
    let b = hall
        .ports()
        .iter()
        .position(|p| p.location.as_str() == "B")
        .unwrap();
    let a = hall
        .ports()
        .iter()
        .position(|p| p.location.as_str() == "A")
        .unwrap();
    let mut cfg = hall
        .enter(&hall.start(), PortFraming::new(a, AgentState::Step))
        .ok_or("cannot enter A")?;
    // Walk east until the block sits on B's door, then push it out.
    let before = hall.initial_blocks().len();
    let mut exited = None;
    for _ in 0..4 {
        let moves = hall.legal_moves(&cfg);
        let Some(m) = moves
            .iter()
            .find(|m| m.dir == Direction::East && m.kind != MoveKind::ExitStep)
        else {
            break;
        };
        let next = hall.apply_move(&cfg, *m).map_err(|e| e.to_string())?;
        if m.kind == MoveKind::ExitPush {
            exited = Some((cfg.state.len(), next.state.len(), hall.observe(&next)));
        }
        cfg = next;
    }
    let (inside, after, seen) = exited.ok_or("no exit push happened")?;
    ensure(inside == before && after + 1 == before, || {
        format!("blocks {inside} -> {after}")
    })?;
    ensure(seen == Some(PortFraming::new(b, AgentState::Push)), || {
        format!("exit push observed as {seen:?}")
    })?;
    Ok("push, no double push, exit push removes one block".into())
}

fn grid_to_gadget() -> Outcome {
    let t = Instant::now();
    let dicrumbler = Push1Grid::parse(fixtures::DICRUMBLER_GRID).map_err(|e| e.to_string())?;
    let v = verify_equivalence(&dicrumbler, &fixtures::dicrumbler(), &opts(0))
        .map_err(|e| e.to_string())?;
    ensure(v.is_equivalent(), || format!("dicrumbler grid: {v:?}"))?;

    let hall = Push1Grid::parse(fixtures::BLOCK_TRANSIT_HALL).map_err(|e| e.to_string())?;
    let s = synthesize(&hall, &opts(0)).map_err(|e| e.to_string())?;
    let push_in = Symbol::new(Framing::push("A"), Framing::step("A"));
    let carry_out = Symbol::new(Framing::step("A"), Framing::push("B"));
    // Somewhere reachable, a block pushed in at A can then be carried out at B.
    let has_pair = s.gadget.transitions.iter().any(|first| {
        first.symbol() == push_in
            && s.gadget
                .transitions
                .iter()
                .any(|second| second.from == first.to && second.symbol() == carry_out)
    });
    ensure(has_pair, || {
        format!("no push-in then carry-out pair in {:?}", s.gadget)
    })?;
    let word = [carry_out.clone(), push_in, carry_out];
    ensure(accepts(&gadget_to_nfa(&s.gadget), &word), || {
        "transit word rejected".into()
    })?;
    let back = verify_equivalence(&hall, &s.gadget, &opts(0)).map_err(|e| e.to_string())?;
    ensure(back.is_equivalent(), || {
        format!("hall vs its synthesis: {back:?}")
    })?;
    within(t.elapsed(), Duration::from_secs(5), "grid checks")?;
    Ok(format!(
        "dicrumbler grid equivalent; transit hall has {} states",
        s.gadget.states.len()
    ))
}

/// Every word of length at most 6 on which the synthesized gadget and the
/// product oracle disagree, found by walking the tree of words both accept.
fn first_disagreement(
    g: &Gadget,
    oracle: &common::ProductOracle,
    alphabet: &[Symbol],
) -> Option<Vec<Symbol>> {
    fn walk(
        g: &Gadget,
        oracle: &common::ProductOracle,
        alphabet: &[Symbol],
        word: &mut Vec<Symbol>,
        q: &BTreeSet<String>,
        states: &BTreeSet<Vec<String>>,
    ) -> Option<Vec<Symbol>> {
        if word.len() == 6 {
            return None;
        }
        for sym in alphabet {
            let next_q: BTreeSet<String> = q
                .iter()
                .flat_map(|x| g.step(x, sym).unwrap_or_default())
                .collect();
            let next_states = oracle.step(states, sym);
            word.push(sym.clone());
            if next_q.is_empty() != next_states.is_empty() {
                return Some(word.clone());
            }
            if !next_q.is_empty() {
                if let Some(w) = walk(g, oracle, alphabet, word, &next_q, &next_states) {
                    return Some(w);
                }
            }
            word.pop();
        }
        None
    }
    walk(
        g,
        oracle,
        alphabet,
        &mut Vec::new(),
        &BTreeSet::from([g.start.clone()]),
        &oracle.start(),
    )
}

fn composition() -> Outcome {
    let t = Instant::now();
    let mut r = common::rng(7);
    for i in 0..25 {
        let s = common::random_system(&mut r);
        let composite = compose(&s).map_err(|e| format!("system #{i}: {e}"))?;
        let g = synthesize(&composite, &opts(0))
            .map_err(|e| e.to_string())?
            .gadget;
        let oracle = common::ProductOracle::new(&s);
        let labels = oracle.labels();
        let alphabet = gadgetcheck::model::full_alphabet(&labels);
        if let Some(w) = first_disagreement(&g, &oracle, &alphabet) {
            return Err(format!("system #{i} disagrees on {w:?}"));
        }
    }
    within(t.elapsed(), Duration::from_secs(30), "25 systems")?;
    Ok("25 random systems, all words up to length 6".into())
}

fn post_selection() -> Outcome {
    let g = fixtures::toy_checkable_diode();
    let spec = CheckSpec::new("I", "O", "checked");
    let spec = spec.clone().with_broken(infer_broken(&g, &spec));
    let p = post_select(&g, &spec).map_err(|e| e.to_string())?;
    let states: BTreeSet<&str> = p.states.iter().map(String::as_str).collect();
    ensure(states == BTreeSet::from(["fresh", "checked"]), || {
        format!("states {states:?}")
    })?;
    let want: BTreeSet<GadgetTransition> = [
        GadgetTransition::new("fresh", Framing::step("A"), "fresh", Framing::step("B")),
        GadgetTransition::new("fresh", Framing::step("I"), "checked", Framing::step("O")),
    ]
    .into();
    let got: BTreeSet<GadgetTransition> = p.transitions.iter().cloned().collect();
    ensure(got == want, || format!("transitions {got:?}"))?;
    Ok("{fresh, checked} with the two expected transitions".into())
}

fn determinism() -> Outcome {
    let mut count = 0;
    let text = |g: &Gadget| write_gadget(g, &[]);
    for grid in [
        fixtures::HALL_GRID,
        fixtures::BLOCK_TRANSIT_HALL,
        fixtures::DICRUMBLER_GRID,
    ] {
        let c = Push1Grid::parse(grid).map_err(|e| e.to_string())?;
        let one = synthesize(&c, &opts(1)).map_err(|e| e.to_string())?.gadget;
        let four = synthesize(&c, &opts(4)).map_err(|e| e.to_string())?.gadget;
        ensure(text(&one) == text(&four), || {
            format!("grid differs across workers:\n{grid}")
        })?;
        count += 1;
    }
    for g in fixtures::all_gadgets() {
        let m = g.machine().map_err(|e| e.to_string())?;
        let one = synthesize(&m, &opts(1)).map_err(|e| e.to_string())?.gadget;
        let four = synthesize(&m, &opts(4)).map_err(|e| e.to_string())?.gadget;
        ensure(text(&one) == text(&four), || {
            format!("{} fixture differs across workers", g.start)
        })?;
        count += 1;
    }
    Ok(format!(
        "{count} fixtures byte-identical with 1 and 4 workers"
    ))
}

fn solver() -> Outcome {
    let t = Instant::now();
    let mut r = common::rng(10);
    let mut solved = 0;
    for i in 0..20 {
        let level = common::random_level(&mut r);
        let grid = Push1Grid::parse(&level).map_err(|e| format!("level #{i}: {e}"))?;
        let (start, goal) = (grid.agent_start().unwrap(), grid.goal().unwrap());
        let ours = solve_reachability(&grid, start, goal, 1_000_000).map_err(|e| e.to_string())?;
        let naive = common::naive_shortest(&level);
        match (&ours, naive) {
            (Some(moves), Some(n)) => {
                let text = format_moves(moves);
                ensure(moves.len() == n, || {
                    format!("level #{i}: {} moves, oracle {n}\n{level}", moves.len())
                })?;
                ensure(common::replay_reaches_goal(&level, &text), || {
                    format!("level #{i}: {text} does not replay")
                })?;
                solved += 1;
            }
            (None, None) => {}
            _ => {
                return Err(format!(
                    "level #{i}: solver {ours:?}, oracle {naive:?}\n{level}"
                ))
            }
        }
    }
    within(t.elapsed(), Duration::from_secs(10), "20 levels")?;
    Ok(format!("20 levels, {solved} solvable"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("round-trip synthesis", round_trip),
        ("self-closing door", door_conformance),
        ("minimization optimality", minimization),
        ("equivalence witnesses", witnesses),
        ("Push-1 rules", push_rules),
        ("grid to gadget", grid_to_gadget),
        ("composition oracle", composition),
        ("post-selection", post_selection),
        ("determinism under parallelism", determinism),
        ("solver oracle", solver),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let took = t.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name:<30} {took:>10.1?}  {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name:<30} {took:>10.1?}  {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
