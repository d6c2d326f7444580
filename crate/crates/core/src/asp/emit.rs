use std::collections::BTreeMap;

use crate::calculus::{Calculus, RelationId, RelationSet};
use crate::solver::Instance;

use super::layout::representative;
use super::terms::{compare_terms, render_term};
use super::{AspError, AspLayout, EncodingKind, ProgramText};

/// Largest table cell written as a disjunctive rule in `coi7`; larger cells
/// become integrity constraints over the excluded relations.
pub const DISJUNCTION_THRESHOLD: usize = 7;

/// The encoding of `calc` with its default layout.
pub fn emit_program(calc: &Calculus, kind: EncodingKind) -> ProgramText {
    emit_program_with(calc, kind, &AspLayout::for_calculus(calc)).expect("built-in layouts are consistent")
}

pub fn emit_program_with(calc: &Calculus, kind: EncodingKind, layout: &AspLayout) -> Result<ProgramText, AspError> {
    layout.check(calc)?;
    Ok(match kind {
        EncodingKind::Coi7 => coi7(calc, layout),
        EncodingKind::Ctsa => ctsa(calc, layout, false),
        EncodingKind::Ctsa2 => ctsa(calc, layout, true),
        EncodingKind::Gen => gen(calc),
    })
}

fn sym(calc: &Calculus, r: RelationId) -> &str {
    calc.symbol(r)
}

/// Atom for "`r` holds from `a` to `b`" in the single-predicate encoding.
fn coi7_atom(calc: &Calculus, layout: &AspLayout, r: RelationId, a: &str, b: &str) -> String {
    let p = sym(calc, representative(calc, r));
    if layout.swapped.contains(r) {
        format!("{p}({b},{a})")
    } else {
        format!("{p}({a},{b})")
    }
}

fn coi7(calc: &Calculus, layout: &AspLayout) -> ProgramText {
    let mut out = ProgramText::default();
    let (v1, v2) = (layout.choice_vars.0.as_str(), layout.choice_vars.1.as_str());
    // Only relations folded into a converse's predicate are written swapped here.
    let choice: Vec<String> = layout
        .choice_order
        .iter()
        .map(|&r| {
            let p = sym(calc, representative(calc, r));
            if representative(calc, r) != r {
                format!("{p}({v2},{v1})")
            } else {
                format!("{p}({v1},{v2})")
            }
        })
        .collect();
    out.push(format!("{{{}}}=1 :- traj({v1}), traj({v2}), {v1}!={v2}.", choice.join("; ")));
    out.push(format!("{}(X,X) :- traj(X).", sym(calc, calc.equality())));
    let atom = |r, a, b| coi7_atom(calc, layout, r, a, b);
    for r1 in calc.relations() {
        for r2 in calc.relations() {
            let cell = calc.compose(r1, r2);
            let body = format!("{}, {}", atom(r1, "X", "Y"), atom(r2, "Y", "Z"));
            if cell.len() <= DISJUNCTION_THRESHOLD {
                let heads: Vec<String> = cell.iter().map(|r| atom(r, "X", "Z")).collect();
                out.push(format!("{} :- {body}.", heads.join(" | ")));
            } else {
                for r in calc.universe().difference(cell) {
                    out.push(format!(":- {}, {body}.", atom(r, "X", "Z")));
                }
            }
        }
    }
    for &r1 in &layout.choice_order {
        for &r2 in &layout.choice_order {
            if r1 != r2 {
                out.push(format!(":- {}, {}.", atom(r1, "X", "Z"), atom(r2, "X", "Z")));
            }
        }
    }
    out
}

fn ctsa(calc: &Calculus, layout: &AspLayout, known_facts: bool) -> ProgramText {
    let mut out = ProgramText::default();
    let choice: Vec<String> = layout.choice_order.iter().map(|&r| format!("{}(X,Y)", sym(calc, r))).collect();
    let guard = if known_facts { ", #count{R : fact(R,X,Y)} = 0" } else { "" };
    out.push(format!("{{{}}}=1 :- traj(X), traj(Y), X<Y{guard}.", choice.join("; ")));
    out.push(format!("{}(X,X) :- traj(X).", sym(calc, calc.equality())));
    for r1 in calc.relations() {
        for r2 in calc.relations() {
            let mut rule = format!(":- {}(X,Y), {}(Y,Z)", sym(calc, r1), sym(calc, r2));
            for r in calc.compose(r1, r2) {
                rule.push_str(&format!(", not {}(X,Z)", sym(calc, r)));
            }
            rule.push('.');
            out.push(rule);
        }
    }
    for r in calc.relations() {
        let c = calc.converse(r);
        if r < c {
            let (rs, cs) = (sym(calc, r), sym(calc, c));
            out.push(format!("{cs}(X,Y) :- {rs}(Y,X), Y<X."));
            out.push(format!("{rs}(X,Y) :- {cs}(Y,X), Y<X."));
        }
    }
    if known_facts {
        for r in calc.relations() {
            let s = sym(calc, r);
            out.push(format!("{s}(X,Y) :- fact({s},X,Y)."));
        }
    }
    out
}

fn gen(calc: &Calculus) -> ProgramText {
    let mut out = ProgramText::default();
    out.push("{true(X,R,Y) : relation(R)} = 1 :- element(X); element(Y); X != Y.");
    out.push(format!("true(X,{},X) :- element(X).", sym(calc, calc.equality())));
    out.push(":- true(X,R1,Y); true(Y,R2,Z); not true(X,Rout,Z) : table(R1,R2,Rout).");
    out.push(":- possible(X,_,Y); not true(X,R,Y) : possible(X,R,Y).");
    out.push(format!("relation({}).", calc.symbols().join("; ")));
    for r1 in calc.relations() {
        for r2 in calc.relations() {
            let outs: Vec<&str> = calc.compose(r1, r2).iter().map(|r| sym(calc, r)).collect();
            out.push(format!("table({}, {}, ({})).", sym(calc, r1), sym(calc, r2), outs.join(";")));
        }
    }
    out
}

fn singleton(rels: RelationSet, kind: EncodingKind) -> Result<RelationId, AspError> {
    rels.single().ok_or(AspError::NonSingleton { encoding: encoding_label(kind) })
}

fn encoding_label(kind: EncodingKind) -> &'static str {
    match kind {
        EncodingKind::Coi7 => "COI7",
        EncodingKind::Ctsa => "CTSA",
        EncodingKind::Ctsa2 => "CTSA2",
        EncodingKind::Gen => "GEN",
    }
}

/// Facts describing an instance for the given encoding.
///
/// `gen` accepts any constraint; constraints on the same ordered pair are
/// intersected first, and an empty intersection becomes a constraint that
/// always fires. The other encodings need singleton constraints; `ctsa` and
/// `ctsa2` write each pair with the smaller term first, converting the
/// relation when the pair is flipped.
pub fn emit_instance_facts(inst: &Instance, kind: EncodingKind) -> Result<ProgramText, AspError> {
    let calc = inst.calculus();
    let names: Vec<String> = inst.elements().iter().map(|e| render_term(e)).collect();
    let mut out = ProgramText::default();
    let unary = if kind == EncodingKind::Gen { "element" } else { "traj" };
    for n in &names {
        out.push(format!("{unary}({n})."));
    }
    match kind {
        EncodingKind::Gen => {
            let mut folded: BTreeMap<(usize, usize), RelationSet> = BTreeMap::new();
            for c in inst.constraints() {
                *folded.entry((c.x, c.y)).or_insert(calc.universe()) &= c.rels;
            }
            // Keep first-mention order for readability.
            let mut order: Vec<(usize, usize)> = Vec::new();
            for c in inst.constraints() {
                if !order.contains(&(c.x, c.y)) {
                    order.push((c.x, c.y));
                }
            }
            for (x, y) in order {
                let rels = folded[&(x, y)];
                if rels.is_empty() {
                    out.push(format!(":- element({}), element({}).", names[x], names[y]));
                }
                for r in rels {
                    out.push(format!("possible({},{},{}).", names[x], sym(calc, r), names[y]));
                }
            }
        }
        EncodingKind::Coi7 => {
            let layout = AspLayout::for_calculus(calc);
            for c in inst.constraints() {
                let r = singleton(c.rels, kind)?;
                out.push(format!("{}.", coi7_atom(calc, &layout, r, &names[c.x], &names[c.y])));
            }
        }
        EncodingKind::Ctsa | EncodingKind::Ctsa2 => {
            for c in inst.constraints() {
                let r = singleton(c.rels, kind)?;
                let (ex, ey) = (&inst.elements()[c.x], &inst.elements()[c.y]);
                let (x, y, r) = if compare_terms(ex, ey).is_le() {
                    (&names[c.x], &names[c.y], r)
                } else {
                    (&names[c.y], &names[c.x], calc.converse(r))
                };
                if kind == EncodingKind::Ctsa {
                    out.push(format!("{}({x},{y}).", sym(calc, r)));
                } else {
                    out.push(format!("fact({},{x},{y}).", sym(calc, r)));
                }
            }
        }
    }
    Ok(out)
}
