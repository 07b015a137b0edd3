use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context};
use serde::Serialize;
use uniclass_core::counting::{
    card_e2star, dim_d, dim_e2, fibration_comparisons, formula_oracle_comparisons, Comparison, Counter, FormulaMutation,
    SuiteLimits,
};
use uniclass_core::filtration::{
    admissible_labels, bijection_report, canonical_filtration, class_label, invariant_checks, BijectionOptions,
    BijectionReport, FiltrationMutation, OrbitRecord, PieceRecord,
};
use uniclass_core::nilpotent::NilpotentWitness;
use uniclass_core::quadspace::{is_unipotent, standard_space_from, unipotent_count};
use uniclass_core::{field_of_order, FieldCtx, FormType, Mat, QuadSpace, SpaceDescriptor};

use crate::output::{Envelope, FieldInfo, Sink};
use crate::{Mutation, Suite, Verdict};

fn open_space(space: &str, q: u32) -> anyhow::Result<(Arc<FieldCtx>, SpaceDescriptor, QuadSpace)> {
    let desc: SpaceDescriptor = space.parse()?;
    let ctx = Arc::new(field_of_order(q)?);
    let s = standard_space_from(&ctx, desc)?;
    Ok((ctx, desc, s))
}

fn guard_unipotents(desc: SpaceDescriptor, q: u32, guard: u64) -> anyhow::Result<()> {
    let n = unipotent_count(desc.dim, q);
    if n > guard.into() {
        bail!("guard exceeded: {desc} over GF({q}) has {n} unipotent elements (guard {guard}); try a smaller q or D");
    }
    Ok(())
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Mismatch
    }
}

#[derive(Serialize)]
struct Level {
    degree: i32,
    /// Rows span X^{≥degree}.
    basis: Vec<Vec<u8>>,
}

#[derive(Serialize)]
struct Classification {
    dickson: u8,
    jordan_c: Vec<usize>,
    jordan_eps: Vec<u8>,
    filtration: Vec<Level>,
    phi: String,
    component: Option<u8>,
    partition: Vec<Vec<usize>>,
}

pub fn classify(sink: &Sink, space: &str, q: u32, matrix: &Path) -> anyhow::Result<Verdict> {
    let (ctx, desc, s) = open_space(space, q)?;
    let text = std::fs::read_to_string(matrix).with_context(|| format!("reading {}", matrix.display()))?;
    let u = Mat::parse(&text, &ctx)?;
    if u.rows() != desc.dim || u.cols() != desc.dim {
        bail!("matrix is {}x{} but {desc} has dimension {}", u.rows(), u.cols(), desc.dim);
    }
    if !s.is_isometry(&u) {
        bail!("not an isometry of {desc}");
    }
    if !is_unipotent(&ctx, &u) {
        bail!("not unipotent");
    }
    let dickson = s.dickson(&u)?;
    if dickson != 0 {
        bail!("not in SO (Dickson invariant {dickson})");
    }
    let w = NilpotentWitness::from_unipotent(s.clone(), &u)?;
    let jordan = w.jordan_data()?;
    let f = canonical_filtration(&w)?;
    let label = class_label(&s, &f, w.n())?;
    let filtration = (f.lo()..f.hi())
        .map(|a| Level { degree: a, basis: f.at(a).basis().row_vectors() })
        .collect();
    let record = Classification {
        dickson,
        jordan_c: jordan.c.clone(),
        jordan_eps: jordan.eps.clone(),
        filtration,
        phi: label.piece.to_string(),
        component: label.piece.component,
        partition: label.partition.clone(),
    };
    let mut out = String::new();
    writeln!(out, "space {desc} over GF({q}), Dickson invariant {dickson}")?;
    writeln!(out, "Jordan block counts c_i (i = 1..): {:?}", &record.jordan_c.get(1..).unwrap_or(&[]))?;
    if ctx.is_char2() {
        writeln!(out, "eps_i (i = 1..): {:?}", &record.jordan_eps.get(1..).unwrap_or(&[]))?;
    }
    writeln!(out, "canonical filtration (X^>=a = V for a < {}, 0 for a >= {}):", f.lo(), f.hi())?;
    for level in &record.filtration {
        writeln!(out, "  X^>={}: {:?}", level.degree, level.basis)?;
    }
    writeln!(out, "label {label}")?;
    let env = Envelope::new(Some(FieldInfo::of(&ctx)), Some(desc.to_string()), vec![record]);
    sink.emit(&env, out, None)?;
    Ok(Verdict::Pass)
}

/// One space over one field: every admissible label with predicted and
/// observed piece sizes.
#[derive(Serialize)]
struct PieceReport {
    #[serde(rename = "D")]
    dim: usize,
    q: u32,
    #[serde(rename = "type")]
    form_type: String,
    unipotents: u64,
    expected_unipotents: String,
    passed: bool,
    uniqueness: Option<bool>,
    labels_constant_on_orbits: Option<bool>,
    labels: Vec<PieceRecord>,
}

fn type_name(t: FormType) -> &'static str {
    match t {
        FormType::Split => "split",
        FormType::NonSplit => "nonsplit",
        FormType::Odd => "odd",
    }
}

impl PieceReport {
    fn from(desc: SpaceDescriptor, r: BijectionReport) -> Self {
        PieceReport {
            dim: r.dim,
            q: r.q,
            form_type: type_name(desc.form_type).into(),
            unipotents: r.unipotents,
            expected_unipotents: r.expected_unipotents,
            passed: r.passed,
            uniqueness: r.uniqueness,
            labels_constant_on_orbits: r.labels_constant_on_orbits,
            labels: r.pieces,
        }
    }
}

fn orbit_cells(orbits: &Option<Vec<OrbitRecord>>) -> String {
    let Some(list) = orbits else { return String::new() };
    let cells: Vec<String> = list.iter().map(|o| format!("{:?}:{} in {}", o.partition, o.elements, o.orbits)).collect();
    cells.join(" ")
}

pub fn pieces(sink: &Sink, space: &str, q: u32, orbits: bool, guard: u64) -> anyhow::Result<Verdict> {
    let (ctx, desc, s) = open_space(space, q)?;
    guard_unipotents(desc, q, guard)?;
    eprintln!("enumerating unipotent elements of {desc} over GF({q})");
    let opts = BijectionOptions { orbits, ..Default::default() };
    let report = PieceReport::from(desc, bijection_report(&s, &opts)?);
    let mut text = String::new();
    writeln!(text, "{desc} over GF({q}): {} unipotent elements (expected {})", report.unipotents, report.expected_unipotents)?;
    for p in &report.labels {
        let mark = if p.ok { "ok" } else { "MISMATCH" };
        let predicted = p.predicted_poly.as_deref().unwrap_or("-");
        let at = p.predicted_at_q.as_deref().unwrap_or("-");
        writeln!(text, "  {:<24} {:<40} predicted {:>10} observed {:>10} {mark} {}", p.phi, predicted, at, p.observed, orbit_cells(&p.orbits))?;
    }
    writeln!(text, "{}", if report.passed { "PASS" } else { "FAIL" })?;
    let mut csv = String::from("phi,component,predicted_poly,predicted_at_q,observed,ok\n");
    for p in &report.labels {
        let comp = p.component.map(|c| c.to_string()).unwrap_or_default();
        let poly = p.predicted_poly.clone().unwrap_or_default();
        let at = p.predicted_at_q.clone().unwrap_or_default();
        writeln!(csv, "\"{}\",{comp},\"{poly}\",{at},{},{}", p.phi, p.observed, p.ok)?;
    }
    let passed = report.passed;
    let env = Envelope::new(Some(FieldInfo::of(&ctx)), Some(desc.to_string()), vec![report]);
    sink.emit(&env, text, Some(csv))?;
    Ok(verdict(passed))
}

#[derive(Serialize)]
struct LabelRecord {
    phi: String,
    component: Option<u8>,
    dim_d: usize,
    dim_e2: usize,
    card_e2star: Option<String>,
    card_piece: Option<String>,
    card_piece_at_q: Option<String>,
}

pub fn labels(sink: &Sink, space: &str, q: Option<u32>) -> anyhow::Result<Verdict> {
    let desc: SpaceDescriptor = space.parse()?;
    let field = match q {
        Some(q) => Some(FieldInfo::of(&field_of_order(q)?)),
        None => None,
    };
    let counter = Counter::default();
    let mut records = Vec::new();
    for label in admissible_labels(desc.dim, desc.form_type) {
        let piece = counter.card_piece(&label, desc.form_type).ok();
        records.push(LabelRecord {
            phi: label.to_string(),
            component: label.component,
            dim_d: dim_d(&label),
            dim_e2: dim_e2(&label),
            card_e2star: card_e2star(&label, desc.form_type).ok().map(|p| p.to_string()),
            card_piece_at_q: piece.as_ref().zip(q).map(|(p, q)| p.eval_u64(q as u64).to_string()),
            card_piece: piece.map(|p| p.to_string()),
        });
    }
    let mut text = format!("{desc}: {} admissible labels\n", records.len());
    for r in &records {
        let at = r.card_piece_at_q.as_ref().map(|v| format!(" = {v}")).unwrap_or_default();
        writeln!(text, "  {:<24} d = {:<3} |piece| = {}{at}", r.phi, r.dim_d, r.card_piece.as_deref().unwrap_or("-"))?;
    }
    let mut csv = String::from("phi,component,dim_d,dim_e2,card_e2star,card_piece,card_piece_at_q\n");
    for r in &records {
        let comp = r.component.map(|c| c.to_string()).unwrap_or_default();
        writeln!(
            csv,
            "\"{}\",{comp},{},{},\"{}\",\"{}\",{}",
            r.phi,
            r.dim_d,
            r.dim_e2,
            r.card_e2star.clone().unwrap_or_default(),
            r.card_piece.clone().unwrap_or_default(),
            r.card_piece_at_q.clone().unwrap_or_default()
        )?;
    }
    sink.emit(&Envelope::new(field, Some(desc.to_string()), records), text, Some(csv))?;
    Ok(Verdict::Pass)
}

#[derive(Serialize)]
#[serde(untagged)]
enum Counterexample {
    Comparison(Comparison),
    Piece { space: String, q: u32, piece: Box<PieceRecord> },
    Message { space: String, q: u32, message: String },
}

#[derive(Serialize)]
struct SuiteVerdict {
    suite: &'static str,
    passed: bool,
    checked: u64,
    /// Spaces or fields left out, with the reason.
    skipped: Vec<String>,
    counterexamples: Vec<Counterexample>,
}

impl SuiteVerdict {
    fn new(suite: &'static str) -> Self {
        SuiteVerdict { suite, passed: true, checked: 0, skipped: Vec::new(), counterexamples: Vec::new() }
    }

    fn fail(&mut self, c: Counterexample) {
        self.passed = false;
        self.counterexamples.push(c);
    }
}

fn standard_spaces(dmax: usize) -> Vec<SpaceDescriptor> {
    let mut out = Vec::new();
    for dim in 2..=dmax {
        let types: &[FormType] = if dim % 2 == 1 { &[FormType::Odd] } else { &[FormType::Split, FormType::NonSplit] };
        out.extend(types.iter().map(|&form_type| SpaceDescriptor { dim, form_type }));
    }
    out
}

fn theorem17_suite(dmax: usize, qs: &[u32], mutation: FiltrationMutation, guard: u64) -> anyhow::Result<SuiteVerdict> {
    let mut v = SuiteVerdict::new("theorem17");
    for &q in qs {
        let ctx = Arc::new(field_of_order(q)?);
        for desc in standard_spaces(dmax) {
            if guard_unipotents(desc, q, guard).is_err() {
                v.skipped.push(format!("{desc} q={q}: over the guard"));
                continue;
            }
            eprintln!("theorem17: {desc} over GF({q})");
            let s = standard_space_from(&ctx, desc)?;
            let opts = BijectionOptions { uniqueness: desc.dim <= 4 && q <= 3, mutation, ..Default::default() };
            let space = desc.to_string();
            match bijection_report(&s, &opts) {
                Ok(r) => {
                    v.checked += r.unipotents;
                    for p in r.failures() {
                        v.fail(Counterexample::Piece { space: space.clone(), q, piece: Box::new(p.clone()) });
                    }
                    for l in &r.stray_labels {
                        v.fail(Counterexample::Message { space: space.clone(), q, message: format!("inadmissible label {l}") });
                    }
                    if r.uniqueness == Some(false) {
                        v.fail(Counterexample::Message { space: space.clone(), q, message: "adapted filtration not unique".into() });
                    }
                    if r.unipotents.to_string() != r.expected_unipotents {
                        let message = format!("{} unipotents, expected {}", r.unipotents, r.expected_unipotents);
                        v.fail(Counterexample::Message { space: space.clone(), q, message });
                    }
                }
                Err(e) => v.fail(Counterexample::Message { space, q, message: e.to_string() }),
            }
        }
    }
    Ok(v)
}

fn counts_suite(dmax: usize, qs: &[u32], counter: Counter, guard: u64) -> anyhow::Result<SuiteVerdict> {
    let mut v = SuiteVerdict::new("counts");
    eprintln!("counts: formulas against enumeration for s <= {dmax}");
    let limits = SuiteLimits { smax: dmax, guard: guard.min(SuiteLimits::default().guard), e2_dmax: dmax.min(5) };
    let mut report = formula_oracle_comparisons(&counter, qs, limits)?;
    eprintln!("counts: fibration over the graded models");
    report.comparisons.extend(fibration_comparisons(qs, dmax.min(4), 1 << 20)?.comparisons);
    v.checked = report.comparisons.len() as u64;
    for c in report.comparisons.into_iter().filter(|c| !c.ok) {
        v.fail(Counterexample::Comparison(c));
    }
    Ok(v)
}

fn invariants_suite(dmax: usize, qs: &[u32], guard: u64) -> anyhow::Result<SuiteVerdict> {
    let mut v = SuiteVerdict::new("invariants");
    for &q in qs {
        let ctx = Arc::new(field_of_order(q)?);
        if !ctx.is_char2() {
            v.skipped.push(format!("q={q}: stated for characteristic 2"));
            continue;
        }
        for desc in standard_spaces(dmax) {
            if guard_unipotents(desc, q, guard).is_err() {
                v.skipped.push(format!("{desc} q={q}: over the guard"));
                continue;
            }
            eprintln!("invariants: {desc} over GF({q})");
            let s = standard_space_from(&ctx, desc)?;
            let unis = s.unipotent_elements()?;
            match invariant_checks(&s, &unis) {
                Ok(r) => v.checked += r.elements + r.dickson_checked,
                Err(e) => v.fail(Counterexample::Message { space: desc.to_string(), q, message: e.to_string() }),
            }
        }
    }
    Ok(v)
}

pub fn verify(sink: &Sink, suite: Suite, dmax: usize, qs: &[u32], mutation: Option<Mutation>, guard: u64) -> anyhow::Result<Verdict> {
    if dmax < 2 {
        bail!("--dmax must be at least 2");
    }
    for &q in qs {
        field_of_order(q)?;
    }
    let counter = Counter::mutated(FormulaMutation { literal_t_minus_k: mutation == Some(Mutation::LiteralTMinusK) });
    let filt = FiltrationMutation { drop_lambda_shift: mutation == Some(Mutation::DropLambdaShift) };
    let mut verdicts = Vec::new();
    if matches!(suite, Suite::Theorem17 | Suite::All) {
        verdicts.push(theorem17_suite(dmax, qs, filt, guard)?);
    }
    if matches!(suite, Suite::Counts | Suite::All) {
        verdicts.push(counts_suite(dmax, qs, counter, guard)?);
    }
    if matches!(suite, Suite::Invariants | Suite::All) {
        verdicts.push(invariants_suite(dmax, qs, guard)?);
    }
    let passed = verdicts.iter().all(|v| v.passed);
    let mut text = String::new();
    for v in &verdicts {
        writeln!(text, "{:<11} {} ({} checked, {} skipped)", v.suite, if v.passed { "PASS" } else { "FAIL" }, v.checked, v.skipped.len())?;
        for c in v.counterexamples.iter().take(5) {
            writeln!(text, "  counterexample: {}", serde_json::to_string(c)?)?;
        }
    }
    sink.emit(&Envelope::new(None, None, verdicts), text, None)?;
    Ok(verdict(passed))
}
