//! One pass/fail line per acceptance criterion. Runs as a plain binary so the
//! lines appear in order on stdout; exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use uniclass_core::counting::{
    card_e2star, card_piece, fibration_comparisons, formula_oracle_comparisons, nu, nu_eps, ComparisonReport, Counter,
    FormulaMutation, SuiteLimits,
};
use uniclass_core::filtration::{
    admissible_labels, bijection_report, class_partition, invariant_checks,
    BijectionOptions, BijectionReport, Checks, ClassLabel, FiltrationMutation, InvariantSummary, PieceLabel,
};
use uniclass_core::quadspace::{standard_space, DEFAULT_GROUP_GUARD};
use uniclass_core::{field_of_order, FormType, QuadSpace, SpaceDescriptor};

type Outcome = Result<String, String>;

fn space(q: u32, d: usize, t: FormType) -> QuadSpace {
    standard_space(&Arc::new(field_of_order(q).unwrap()), d, t).unwrap()
}

fn name(d: usize, t: FormType) -> String {
    SpaceDescriptor { dim: d, form_type: t }.to_string()
}

fn types_for(d: usize) -> Vec<FormType> {
    if d % 2 == 1 {
        vec![FormType::Odd]
    } else {
        vec![FormType::Split, FormType::NonSplit]
    }
}

fn note(line: &str) {
    eprintln!("  {line}");
}

/// The spaces whose unipotents are enumerated in full.
fn census_spaces() -> Vec<(u32, usize, FormType)> {
    let mut out = Vec::new();
    for q in [2, 3, 4, 5] {
        for d in 2..=4 {
            out.extend(types_for(d).into_iter().map(|t| (q, d, t)));
        }
    }
    for q in [2, 3] {
        for d in 5..=6 {
            out.extend(types_for(d).into_iter().map(|t| (q, d, t)));
        }
    }
    out.push((2, 7, FormType::Odd));
    out
}

struct Census {
    reports: Vec<(u32, usize, FormType, BijectionReport)>,
    errors: Vec<String>,
    seconds: f64,
}

fn run_census() -> Census {
    let start = Instant::now();
    let mut reports = Vec::new();
    let mut errors = Vec::new();
    for (q, d, t) in census_spaces() {
        let s = space(q, d, t);
        let opts = BijectionOptions { uniqueness: d <= 4 && q <= 3, ..Default::default() };
        let t0 = Instant::now();
        match bijection_report(&s, &opts) {
            Ok(r) => {
                note(&format!("{} q={q}: {} unipotents, {} pieces, {:.1}s", name(d, t), r.unipotents, r.pieces.len(), t0.elapsed().as_secs_f64()));
                reports.push((q, d, t, r));
            }
            Err(e) => errors.push(format!("{} q={q}: {e}", name(d, t))),
        }
    }
    Census { reports, errors, seconds: start.elapsed().as_secs_f64() }
}

fn bijection(c: &Census) -> Outcome {
    if let Some(e) = c.errors.first() {
        return Err(format!("analysis failed: {e}"));
    }
    let mut elements = 0;
    let mut unique = 0;
    for (q, d, t, r) in &c.reports {
        let label = format!("{} q={q}", name(*d, *t));
        if r.unipotents.to_string() != r.expected_unipotents {
            return Err(format!("{label}: {} unipotents, expected {}", r.unipotents, r.expected_unipotents));
        }
        if !r.stray_labels.is_empty() {
            return Err(format!("{label}: inadmissible labels {:?}", r.stray_labels));
        }
        match r.uniqueness {
            Some(false) => return Err(format!("{label}: an element has more than one adapted filtration")),
            Some(true) => unique += r.unipotents,
            None => {}
        }
        elements += r.unipotents;
    }
    if c.seconds >= 600.0 {
        return Err(format!("took {:.0}s, limit 600s", c.seconds));
    }
    Ok(format!(
        "{} spaces, {elements} unipotents each with an adapted canonical filtration; uniqueness searched on {unique}; {:.0}s",
        c.reports.len(),
        c.seconds
    ))
}

fn piece_counts(c: &Census) -> Outcome {
    if c.reports.is_empty() {
        return Err("no census".into());
    }
    let mut pieces = 0;
    for (q, d, t, r) in &c.reports {
        if let Some(p) = r.failures().next() {
            return Err(format!("{} q={q} {}: predicted {:?}, observed {}", name(*d, *t), p.phi, p.predicted_at_q, p.observed));
        }
        let sum: BigInt = r.pieces.iter().map(|p| p.predicted_at_q.as_ref().unwrap().parse::<BigInt>().unwrap()).sum();
        if sum.to_string() != r.expected_unipotents {
            return Err(format!("{} q={q}: pieces sum to {sum}, expected {}", name(*d, *t), r.expected_unipotents));
        }
        pieces += r.pieces.len();
    }
    for (q, want) in [(2, 3), (3, 8)] {
        let r = &c.reports.iter().find(|(rq, d, _, _)| *rq == q && *d == 3).unwrap().3;
        let reg = r.pieces.iter().find(|p| p.phi == "(1,0,1,0,1)").unwrap();
        if reg.observed != want || reg.predicted_poly.as_deref() != Some("q^2 - 1") {
            return Err(format!("D3 q={q} regular piece: {:?} observed {}", reg.predicted_poly, reg.observed));
        }
    }
    Ok(format!("{pieces} pieces match card_piece and sum to the unipotent count; D3 regular piece q^2 - 1 = 3, 8"))
}

fn descending(top: usize) -> Vec<Vec<usize>> {
    fn go(prev: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        for x in (1..prev).rev() {
            cur.push(x);
            go(x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(top, &mut vec![top], &mut out);
    out
}

fn polynomiality(suite: &ComparisonReport, c: &Census) -> Outcome {
    let mut checked = 0;
    for d in 1..=8 {
        for r in descending(d) {
            let res = if d % 2 == 0 { nu_eps(1, &r).and(nu_eps(-1, &r)) } else { nu(&r) };
            res.map_err(|e| format!("nu {r:?}: {e}"))?;
            checked += 1;
        }
        for t in types_for(d).into_iter().filter(|_| d >= 2) {
            for label in admissible_labels(d, t) {
                card_e2star(&label, t).map_err(|e| format!("|E2*| {} {label}: {e}", name(d, t)))?;
                card_piece(&label, t).map_err(|e| format!("card_piece {} {label}: {e}", name(d, t)))?;
                checked += 2;
            }
        }
    }
    let mut per_q = BTreeMap::new();
    for cmp in &suite.comparisons {
        if cmp.quantity.starts_with("nu") || cmp.quantity.starts_with("|E2*|") {
            if !cmp.ok {
                return Err(format!("{} at q={}: predicted {:?}, observed {}", cmp.quantity, cmp.q, cmp.predicted, cmp.observed));
            }
            *per_q.entry(cmp.q).or_insert(0) += 1;
        }
    }
    for (q, _, _, r) in &c.reports {
        if r.pieces.iter().all(|p| p.ok) {
            *per_q.entry(*q).or_insert(0) += r.pieces.len();
        }
    }
    for q in [2, 3, 4, 5] {
        if per_q.get(&q).copied().unwrap_or(0) == 0 {
            return Err(format!("no enumerated comparisons at q={q}"));
        }
    }
    Ok(format!("{checked} integer polynomials for D <= 8; enumerated matches per q {per_q:?}"))
}

fn formula_suite(suite: &ComparisonReport) -> Outcome {
    if let Some(m) = suite.mismatches().next() {
        return Err(format!("{} at q={}: predicted {:?}, observed {}", m.quantity, m.q, m.predicted, m.observed));
    }
    // The four count_n cases by the parity of the ambient and the subspace.
    let mut cases = std::collections::BTreeSet::new();
    for c in suite.comparisons.iter().filter(|c| c.ok) {
        if let Some((left, right)) = c.quantity.strip_prefix("N[").and_then(|x| x.split_once(',')) {
            cases.insert((left.ends_with(['+', '-']), right.ends_with("*]")));
        }
    }
    if cases.len() != 4 {
        return Err(format!("count_n cases covered: {cases:?}"));
    }
    let families = [("nu'", ""), ("A_", ""), ("R_", ""), ("|O| via P_", ""), ("|O| via P_", "^")];
    for (prefix, inner) in families {
        if !suite.comparisons.iter().any(|c| c.quantity.starts_with(prefix) && c.quantity.contains(inner)) {
            return Err(format!("no comparisons for {prefix}{inner}"));
        }
    }
    let n = suite.comparisons.len();
    if n < 200 {
        return Err(format!("only {n} comparisons"));
    }
    Ok(format!("{n} comparisons over q = 2, 3, 4, 5, s <= 6, all equal"))
}

fn reduction_invariants() -> Outcome {
    let mut total = InvariantSummary::default();
    for (q, dmax) in [(2, 6), (4, 4)] {
        for d in 2..=dmax {
            for t in types_for(d) {
                let s = space(q, d, t);
                let what = format!("{} q={q}", name(d, t));
                let unis = s.unipotent_elements().map_err(|e| format!("{what}: {e}"))?;
                let r = invariant_checks(&s, &unis).map_err(|e| format!("{what}: {e}"))?;
                total.elements += r.elements;
                total.reductions += r.reductions;
                total.dickson_checked += r.dickson_checked;
            }
        }
    }
    Ok(format!(
        "{} unipotents over GF(2), GF(4): {} reduction steps match predict_reduced, line, perp and xi checks hold; Dickson parity on {} N",
        total.elements, total.reductions, total.dickson_checked
    ))
}

fn fibration() -> Outcome {
    let mut report = fibration_comparisons(&[2], 6, 1 << 20).map_err(|e| e.to_string())?;
    report.comparisons.extend(fibration_comparisons(&[3], 4, 1 << 20).map_err(|e| e.to_string())?.comparisons);
    if let Some(m) = report.mismatches().next() {
        return Err(format!("{} at q={}: q^d |E2*| = {:?}, |E>=2*| = {}", m.quantity, m.q, m.predicted, m.observed));
    }
    let positive = report.comparisons.iter().filter(|c| !c.quantity.ends_with("(d = 0)")).count();
    if positive == 0 {
        return Err("no label with d > 0 was enumerated".into());
    }
    let d4 = report.comparisons.iter().filter(|c| c.q == 2 && c.quantity.starts_with("|E>=2*| D4")).count();
    Ok(format!("{} labels (D <= 4 at q = 2: {d4}; {positive} with d > 0): |E>=2*| = q^d |E2*|", report.comparisons.len()))
}

fn nonemptiness(c: &Census) -> Outcome {
    // Formula side: every admissible label has a nonzero count, and the f_0 = 0
    // labels of a nonsplit space have none.
    for d in 2..=8 {
        for t in types_for(d) {
            for label in admissible_labels(d, t) {
                let p = card_piece(&label, t).map_err(|e| e.to_string())?;
                if (2..=5).any(|q| p.eval_u64(q) <= BigInt::from(0)) {
                    return Err(format!("{} {label}: card_piece = {p} is not positive", name(d, t)));
                }
            }
            if t == FormType::NonSplit {
                for excluded in admissible_labels(d, FormType::Split).into_iter().filter(|l| l.f[0] == 0) {
                    if card_piece(&excluded.without_component(), t).is_ok() {
                        return Err(format!("{} {}: predicted nonempty", name(d, t), excluded.without_component()));
                    }
                }
            }
        }
    }
    // Census side.
    let mut empty = 0;
    for (q, d, t, r) in &c.reports {
        if let Some(p) = r.pieces.iter().find(|p| p.observed == 0) {
            return Err(format!("{} q={q}: piece {} is empty", name(*d, *t), p.phi));
        }
        if *t == FormType::NonSplit {
            let zero_f0 = admissible_labels(*d, FormType::Split).iter().filter(|l| l.f[0] == 0).count() / 2;
            if r.stray_labels.iter().any(|s| s.parse::<PieceLabel>().is_ok_and(|l| l.f[0] == 0)) {
                return Err(format!("{} q={q}: an f_0 = 0 label occurs", name(*d, *t)));
            }
            empty += zero_f0;
        }
    }
    Ok(format!("all admissible pieces nonempty for D <= 8 and in the census; {empty} nonsplit f_0 = 0 labels empty"))
}

struct OrbitTable {
    space: String,
    q: u32,
    /// Class label → (elements, SO-orbits).
    classes: Vec<(ClassLabel, u64, usize)>,
    constant: bool,
}

impl OrbitTable {
    /// Piece label → number of SO-orbits in the piece.
    fn orbits_per_piece(&self) -> BTreeMap<&PieceLabel, usize> {
        let mut out = BTreeMap::new();
        for (l, _, n) in &self.classes {
            *out.entry(&l.piece).or_insert(0) += n;
        }
        out
    }
}

fn orbit_spaces() -> Vec<(u32, usize, FormType)> {
    let mut out = Vec::new();
    for (q, dmax) in [(2, 6), (3, 5), (4, 4), (5, 4)] {
        for d in 2..=dmax {
            out.extend(types_for(d).into_iter().map(|t| (q, d, t)));
        }
    }
    out
}

fn orbit_tables() -> Result<Vec<OrbitTable>, String> {
    let mut out = Vec::new();
    for (q, d, t) in orbit_spaces() {
        let s = space(q, d, t);
        let what = format!("{} q={q}", name(d, t));
        let unis = s.unipotent_elements().map_err(|e| format!("{what}: {e}"))?;
        let gens = s.special_orthogonal_generators(DEFAULT_GROUP_GUARD).map_err(|e| format!("{what}: {e}"))?;
        let part = class_partition(&s, &unis, &gens).map_err(|e| format!("{what}: {e}"))?;
        let classes = part.classes.into_iter().map(|c| (c.label, c.elements, c.orbits)).collect();
        out.push(OrbitTable { space: name(d, t), q, classes, constant: part.constant });
    }
    Ok(out)
}

fn label_constancy(tables: &[OrbitTable]) -> Outcome {
    for t in tables {
        let cells: Vec<String> = t.classes.iter().map(|(l, e, n)| format!("{l}: {e} in {n}")).collect();
        note(&format!("{} q={}: {}", t.space, t.q, cells.join("; ")));
    }
    if let Some(t) = tables.iter().find(|t| !t.constant) {
        return Err(format!("{} q={}: an SO-orbit carries two labels", t.space, t.q));
    }
    let orbits: usize = tables.iter().flat_map(|t| t.classes.iter().map(|c| c.2)).sum();
    Ok(format!("{} spaces, {orbits} SO-orbits, label (phi, component, S) constant on each (elements in orbits per label above)", tables.len()))
}

fn odd_characteristic(tables: &[OrbitTable]) -> Outcome {
    let odd: Vec<&OrbitTable> = tables.iter().filter(|t| t.q % 2 == 1 && t.space[1..2].parse::<usize>().unwrap() <= 4).collect();
    let mut split = Vec::new();
    for t in &odd {
        for (l, n) in t.orbits_per_piece() {
            if n > 1 {
                split.push(format!("{} q={} {l} ({n} orbits)", t.space, t.q));
            }
        }
    }
    for s in &split {
        note(&format!("splits: {s}"));
    }
    Ok(format!("{} spaces over GF(3), GF(5); {} pieces split into several SO-orbits (reported, not asserted)", odd.len(), split.len()))
}

fn mutations() -> Outcome {
    let mutated = Counter::mutated(FormulaMutation { literal_t_minus_k: true });
    let suite = formula_oracle_comparisons(&mutated, &[2, 3], SuiteLimits::default()).map_err(|e| e.to_string())?;
    let Some(bad) = suite.mismatches().next() else {
        return Err("the P_(t-k) mutation passes the formula suite".into());
    };
    let formula = format!("{} at q={}", bad.quantity, bad.q);
    let mut lambda = None;
    for (q, d, t) in [(2, 3, FormType::Odd), (2, 4, FormType::Split), (2, 4, FormType::NonSplit), (2, 5, FormType::Odd), (4, 3, FormType::Odd)] {
        let opts = BijectionOptions {
            checks: Some(Checks::NONE),
            mutation: FiltrationMutation { drop_lambda_shift: true },
            ..Default::default()
        };
        let failed = match bijection_report(&space(q, d, t), &opts) {
            Ok(r) => (!r.passed).then(|| {
                let p = r.failures().next().map_or("stray labels".to_string(), |p| format!("{} observed {}", p.phi, p.observed));
                format!("{} q={q}: {p}", name(d, t))
            }),
            Err(e) => Some(format!("{} q={q}: {e}", name(d, t))),
        };
        if failed.is_some() {
            lambda = failed;
            break;
        }
    }
    let Some(lambda) = lambda else {
        return Err("dropping the lambda shift passes the bijection check".into());
    };
    Ok(format!("P_(t-k) literal fails ({formula}); dropped lambda shift fails ({lambda})"))
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut emit = |n: usize, what: &str, outcome: Outcome| {
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {n:>2} [{tag}] {what}: {detail}");
    };
    let census = run_census();
    emit(1, "bijection", bijection(&census));
    emit(2, "piece sizes", piece_counts(&census));
    let suite = formula_oracle_comparisons(&Counter::default(), &[2, 3, 4, 5], SuiteLimits::default());
    let suite = match suite {
        Ok(s) => s,
        Err(e) => {
            emit(3, "polynomiality", Err(e.to_string()));
            emit(4, "counting formulas", Err(e.to_string()));
            ComparisonReport::default()
        }
    };
    if !suite.comparisons.is_empty() {
        emit(3, "polynomiality", polynomiality(&suite, &census));
        emit(4, "counting formulas", formula_suite(&suite));
    }
    emit(5, "reduction invariants (p = 2)", reduction_invariants());
    emit(6, "fibration", fibration());
    emit(7, "nonemptiness", nonemptiness(&census));
    match orbit_tables() {
        Ok(tables) => {
            emit(8, "label constancy on orbits", label_constancy(&tables));
            emit(9, "odd characteristic orbits", odd_characteristic(&tables));
        }
        Err(e) => {
            emit(8, "label constancy on orbits", Err(e.clone()));
            emit(9, "odd characteristic orbits", Err(e));
        }
    }
    emit(10, "mutation sensitivity", mutations());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
