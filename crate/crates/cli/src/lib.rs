//! Batch driver: load or generate instances, run checks, render reports.

pub mod args;
mod render;

use std::path::{Path, PathBuf};

use serde::Serialize;

use decalage_core::complex::Complex;
use decalage_core::decalage::eta_m;
use decalage_core::generate::{generate_instance, GenConfig, Profile};
use decalage_core::io::{parse_instance, AnyInstance, Instance, InstanceJson, SheafJson, SiteJson};
use decalage_core::lemmas::lemma_suite;
use decalage_core::module::FGModuleJson;
use decalage_core::report::Report;
use decalage_core::site::{global_sections, sheaf_eta_m, PosetSite};
use decalage_core::spectral::{
    compare_degeneration, degeneration_check_hdr, degeneration_check_ht, hodge_filtration, ht_pages, Degeneration,
    DegenerationComparisonJson, SSPage,
};
use decalage_core::theorem::{verify_main_theorem, verify_main_theorem_with_fault, TheoremReport};
use decalage_core::{CoeffRing, Error, FpPoly, Integers, QPoly, RingSpec};

pub use args::{Cli, Command, FiltrationKind, Format, RingKind};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_HYPOTHESES: i32 = 3;

/// Environment variable naming the directory that `fixture:NAME` resolves in.
pub const FIXTURES_ENV: &str = "DECALAGE_FIXTURES";

/// Exit code plus both renderings of the report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub text: String,
    pub json: String,
}

impl Outcome {
    fn new<T: Serialize>(code: i32, text: String, report: &T) -> Self {
        Outcome {
            code,
            text,
            json: serde_json::to_string_pretty(report).expect("reports serialize") + "\n",
        }
    }

    fn failure(code: i32, command: &str, message: String) -> Self {
        #[derive(Serialize)]
        struct ErrorReport<'a> {
            command: &'a str,
            exit_code: i32,
            error: &'a str,
        }
        let report = ErrorReport {
            command,
            exit_code: code,
            error: &message,
        };
        Outcome::new(code, format!("error: {message}\n"), &report)
    }

    pub fn rendered(&self, format: Format) -> &str {
        match format {
            Format::Text => &self.text,
            Format::Json => &self.json,
        }
    }
}

fn code_of(e: &Error) -> i32 {
    match e {
        e if e.is_input_error() => EXIT_INPUT,
        Error::GenerationBudgetExceeded(_) | Error::HypothesisH1Failed(_) | Error::HypothesisH3Failed(..) => {
            EXIT_HYPOTHESES
        }
        _ => EXIT_VIOLATION,
    }
}

pub fn fixtures_dir() -> PathBuf {
    std::env::var_os(FIXTURES_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures"))
}

/// `fixture:NAME` is `$DECALAGE_FIXTURES/NAME.json`; anything else is a path.
pub fn resolve_path(path: &str) -> PathBuf {
    match path.strip_prefix("fixture:") {
        Some(name) => fixtures_dir().join(format!("{name}.json")),
        None => PathBuf::from(path),
    }
}

/// Instances in a file: one object, or an array of them.
fn load(path: &str) -> Result<Vec<(String, AnyInstance)>, Error> {
    let file = resolve_path(path);
    let text = std::fs::read_to_string(&file).map_err(|e| Error::Parse(format!("{}: {e}", file.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    match value {
        serde_json::Value::Array(items) => items
            .iter()
            .enumerate()
            .map(|(j, v)| {
                let inst: InstanceJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("item {j}: {e}")))?;
                Ok((format!("{path}#{j}"), inst.into_any()?))
            })
            .collect(),
        _ => Ok(vec![(path.to_string(), parse_instance(&text)?)]),
    }
}

fn load_site(spec: &str) -> Result<PosetSite, Error> {
    match spec.strip_prefix("builtin:") {
        Some(name) => PosetSite::builtin(name),
        None => {
            let file = resolve_path(spec);
            let text = std::fs::read_to_string(&file).map_err(|e| Error::Parse(format!("{}: {e}", file.display())))?;
            let json: SiteJson = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            json.to_site()
        }
    }
}

trait Wrap: CoeffRing {
    fn wrap(inst: Instance<Self>) -> AnyInstance;
}

impl Wrap for Integers {
    fn wrap(inst: Instance<Self>) -> AnyInstance {
        AnyInstance::Z(inst)
    }
}

impl Wrap for FpPoly {
    fn wrap(inst: Instance<Self>) -> AnyInstance {
        AnyInstance::FpPoly(inst)
    }
}

impl Wrap for QPoly {
    fn wrap(inst: Instance<Self>) -> AnyInstance {
        AnyInstance::QPoly(inst)
    }
}

/// Runs `$body` with `$k` bound to the concrete instance.
macro_rules! on_any {
    ($inst:expr, $k:ident => $body:expr) => {
        match $inst {
            AnyInstance::Z($k) => $body,
            AnyInstance::FpPoly($k) => $body,
            AnyInstance::QPoly($k) => $body,
        }
    };
}

fn config(cli: &Cli) -> GenConfig {
    GenConfig {
        max_degree: cli.max_degree,
        max_rank: cli.max_rank as usize,
        budget: cli.budget as usize,
    }
}

/// Instance `j` uses seed `seed + j`.
fn generate_with<R: Wrap>(ring: &R, cli: &Cli, profile: Profile) -> Result<Vec<(String, AnyInstance)>, Error> {
    let site = load_site(&cli.poset)?;
    let cfg = config(cli);
    (0..cli.count)
        .map(|j| {
            let seed = cli.seed.wrapping_add(j);
            let k = generate_instance(ring, &site, profile, seed, &cfg)?;
            let label = serde_json::to_value(profile).expect("profile serializes");
            let id = format!("{}-{}", label.as_str().unwrap_or("gen"), seed);
            let inst = if site.len() == 1 {
                Instance::Complex(k.stalk(0).clone())
            } else {
                Instance::Sheaf(k)
            };
            Ok((id, R::wrap(inst)))
        })
        .collect()
}

fn generated(cli: &Cli, profile: Profile) -> Result<Vec<(String, AnyInstance)>, Error> {
    match cli.ring {
        RingKind::Z => {
            let xi = cli.xi.as_deref().unwrap_or("3");
            let p = xi
                .trim()
                .parse::<u64>()
                .map_err(|_| Error::InvalidRing(format!("--xi {xi} is not a prime number")))?;
            generate_with(&Integers::new(p)?, cli, profile)
        }
        RingKind::FpPoly => {
            require_t(cli)?;
            generate_with(&FpPoly::over_prime(cli.characteristic)?, cli, profile)
        }
        RingKind::QPoly => {
            require_t(cli)?;
            generate_with(&QPoly::rational(), cli, profile)
        }
    }
}

fn require_t(cli: &Cli) -> Result<(), Error> {
    match cli.xi.as_deref().map(str::trim) {
        None | Some("t") => Ok(()),
        Some(other) => Err(Error::InvalidRing(format!("polynomial rings use xi = t, got {other}"))),
    }
}

fn instances(cli: &Cli, path: &Option<String>, profile: Option<Profile>) -> Result<Vec<(String, AnyInstance)>, Error> {
    match (path, profile) {
        (Some(p), None) => load(p),
        (None, Some(profile)) => generated(cli, profile),
        (Some(_), Some(_)) => Err(Error::Parse("give either a path or --generate, not both".into())),
        (None, None) => Err(Error::Parse("give a path or --generate PROFILE".into())),
    }
}

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Validate { path } => cmd_validate(path),
        Command::CheckLemmas { path, generate } => cmd_check_lemmas(cli, path, *generate),
        Command::CheckTheorem { path, generate } => cmd_check_theorem(cli, path, *generate),
        Command::Ss { path, filtration, pages } => cmd_ss(path, *filtration, *pages),
        Command::Cohomology { path } => cmd_cohomology(path),
        Command::Eta { path, m } => cmd_eta(path, *m),
        Command::Generate { profile } => cmd_generate(cli, *profile),
    }
}

// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ValidateEntry {
    id: String,
    kind: &'static str,
    valid: bool,
    error: Option<String>,
}

#[derive(Serialize)]
struct ValidateReport {
    command: &'static str,
    instances: Vec<ValidateEntry>,
    valid: bool,
}

fn kind(inst: &AnyInstance) -> &'static str {
    on_any!(inst, k => match k {
        Instance::Complex(_) => "complex",
        Instance::Sheaf(_) => "sheaf",
    })
}

fn cmd_validate(path: &str) -> Outcome {
    let loaded = match load(path) {
        Ok(l) => l,
        Err(e) => return Outcome::failure(code_of(&e), "validate", e.to_string()),
    };
    let entries: Vec<ValidateEntry> = loaded
        .iter()
        .map(|(id, inst)| {
            let err = on_any!(inst, k => k.validate()).err();
            ValidateEntry {
                id: id.clone(),
                kind: kind(inst),
                valid: err.is_none(),
                error: err.map(|e| e.to_string()),
            }
        })
        .collect();
    let valid = entries.iter().all(|e| e.valid);
    let report = ValidateReport {
        command: "validate",
        instances: entries,
        valid,
    };
    let text = render::validate(&report.instances);
    Outcome::new(if valid { EXIT_PASS } else { EXIT_VIOLATION }, text, &report)
}

// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct LemmaTarget {
    target: String,
    passed: bool,
    checks: Report,
}

#[derive(Serialize)]
struct LemmaEntry {
    id: String,
    ring: RingSpec,
    passed: bool,
    targets: Vec<LemmaTarget>,
}

#[derive(Serialize)]
struct LemmaReport {
    command: &'static str,
    seed: u64,
    instances: Vec<LemmaEntry>,
    passed: bool,
    first_failure: Option<String>,
}

fn lemma_targets<R: CoeffRing>(inst: &Instance<R>) -> Vec<(String, Complex<R>)> {
    match inst {
        Instance::Complex(k) => vec![("complex".to_string(), k.clone())],
        Instance::Sheaf(s) => {
            let mut out: Vec<(String, Complex<R>)> = (0..s.site().len())
                .map(|x| (format!("stalk {}", s.site().name(x)), s.stalk(x).clone()))
                .collect();
            out.push(("global sections".to_string(), global_sections(s)));
            out
        }
    }
}

fn lemma_entry<R: CoeffRing>(id: &str, inst: &Instance<R>, seed: u64) -> Result<LemmaEntry, Error> {
    inst.validate()?;
    let targets = lemma_targets(inst)
        .into_iter()
        .map(|(target, k)| {
            let checks = lemma_suite(&k, seed)?;
            Ok(LemmaTarget {
                target,
                passed: checks.passed(),
                checks,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(LemmaEntry {
        id: id.to_string(),
        ring: match inst {
            Instance::Complex(k) => k.ring().spec(),
            Instance::Sheaf(s) => s.ring().spec(),
        },
        passed: targets.iter().all(|t| t.passed),
        targets,
    })
}

fn cmd_check_lemmas(cli: &Cli, path: &Option<String>, profile: Option<Profile>) -> Outcome {
    let loaded = match instances(cli, path, profile) {
        Ok(l) => l,
        Err(e) => return Outcome::failure(code_of(&e), "check-lemmas", e.to_string()),
    };
    let mut entries = Vec::new();
    for (j, (id, inst)) in loaded.iter().enumerate() {
        let seed = cli.seed.wrapping_add(j as u64);
        match on_any!(inst, k => lemma_entry(id, k, seed)) {
            Ok(e) => entries.push(e),
            Err(e) => return Outcome::failure(code_of(&e), "check-lemmas", format!("{id}: {e}")),
        }
    }
    let first_failure = entries.iter().find_map(|e| {
        e.targets.iter().find_map(|t| {
            t.checks
                .failures()
                .next()
                .map(|c| format!("{} / {}: {}: {}", e.id, t.target, c.id, c.detail))
        })
    });
    let passed = first_failure.is_none();
    let report = LemmaReport {
        command: "check-lemmas",
        seed: cli.seed,
        instances: entries,
        passed,
        first_failure,
    };
    let text = render::lemmas(&report.instances, report.first_failure.as_deref());
    Outcome::new(if passed { EXIT_PASS } else { EXIT_VIOLATION }, text, &report)
}

// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct DegenerationSection {
    ht: Degeneration,
    hdr: Degeneration,
    agree: bool,
    comparisons: Vec<DegenerationComparisonJson>,
    cokernels_equal: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Verdict {
    Pass,
    HypothesesNotMet,
    Violation,
}

#[derive(Serialize)]
struct TheoremEntry {
    id: String,
    ring: RingSpec,
    verdict: Verdict,
    theorem: TheoremReport,
    degeneration: DegenerationSection,
}

#[derive(Serialize)]
struct TheoremBatch {
    command: &'static str,
    seed: u64,
    instances: Vec<TheoremEntry>,
    passed: usize,
    hypotheses_not_met: usize,
    violations: usize,
}

fn degeneration_section<R: CoeffRing>(k: &decalage_core::site::SheafComplex<R>) -> Result<DegenerationSection, Error> {
    let ht = degeneration_check_ht(k)?;
    let hdr = degeneration_check_hdr(k)?;
    let g = global_sections(k);
    let f = k.ring().residue_field();
    let mut comparisons = Vec::new();
    for i in g.lo()..=g.hi() {
        for m in k.lo()..=k.hi() {
            comparisons.push(compare_degeneration(k, i, m)?.to_json(&f));
        }
    }
    Ok(DegenerationSection {
        agree: ht.degenerates == hdr.degenerates,
        cokernels_equal: comparisons.iter().all(|c| c.equal),
        ht,
        hdr,
        comparisons,
    })
}

fn theorem_entry<R: CoeffRing>(id: &str, inst: &Instance<R>, fault: Option<i64>) -> Result<TheoremEntry, Error> {
    inst.validate()?;
    let k = inst.clone().into_sheaf();
    let theorem = match fault {
        Some(shift) => verify_main_theorem_with_fault(&k, shift)?,
        None => verify_main_theorem(&k)?,
    };
    let degeneration = degeneration_section(&k)?;
    let verdict = if !theorem.asserted {
        Verdict::HypothesesNotMet
    } else if theorem.passed && degeneration.agree && degeneration.cokernels_equal {
        Verdict::Pass
    } else {
        Verdict::Violation
    };
    Ok(TheoremEntry {
        id: id.to_string(),
        ring: k.ring().spec(),
        verdict,
        theorem,
        degeneration,
    })
}

fn cmd_check_theorem(cli: &Cli, path: &Option<String>, profile: Option<Profile>) -> Outcome {
    let loaded = match instances(cli, path, profile) {
        Ok(l) => l,
        Err(e) => return Outcome::failure(code_of(&e), "check-theorem", e.to_string()),
    };
    let mut entries = Vec::new();
    for (id, inst) in &loaded {
        match on_any!(inst, k => theorem_entry(id, k, cli.inject_fault)) {
            Ok(e) => entries.push(e),
            Err(e) => return Outcome::failure(code_of(&e), "check-theorem", format!("{id}: {e}")),
        }
    }
    let count = |v: Verdict| entries.iter().filter(|e| e.verdict == v).count();
    let report = TheoremBatch {
        command: "check-theorem",
        seed: cli.seed,
        passed: count(Verdict::Pass),
        hypotheses_not_met: count(Verdict::HypothesesNotMet),
        violations: count(Verdict::Violation),
        instances: entries,
    };
    let code = if report.violations > 0 {
        EXIT_VIOLATION
    } else if report.hypotheses_not_met > 0 {
        EXIT_HYPOTHESES
    } else {
        EXIT_PASS
    };
    let mut text = render::theorem_summary(&report.instances, |e| e.id.as_str(), render_verdict);
    // a violation under the hypotheses is printed in full
    for e in report.instances.iter().filter(|e| e.verdict == Verdict::Violation) {
        text.push_str(&serde_json::to_string_pretty(e).expect("reports serialize"));
        text.push('\n');
    }
    Outcome::new(code, text, &report)
}

fn render_verdict(e: &TheoremEntry) -> String {
    let t = &e.theorem;
    let yn = |b: bool| if b { "yes" } else { "no" };
    let verdict = match e.verdict {
        Verdict::Pass => "pass".to_string(),
        Verdict::HypothesesNotMet => "hypotheses not met".to_string(),
        Verdict::Violation => format!("VIOLATION: {}", t.checks.summary()),
    };
    format!(
        "H1 {} H3 {} | {} checks | HT/HdR degenerate {}/{} | {}",
        yn(t.h1),
        yn(t.h3),
        t.checks.checks.len(),
        yn(e.degeneration.ht.degenerates),
        yn(e.degeneration.hdr.degenerates),
        verdict
    )
}

// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct SsReport {
    command: &'static str,
    id: String,
    filtration: &'static str,
    pages: Vec<SSPage>,
    degeneration: Degeneration,
}

fn ss_report<R: CoeffRing>(id: &str, inst: &Instance<R>, filtration: FiltrationKind, r_max: usize) -> Result<SsReport, Error> {
    inst.validate()?;
    let k = inst.clone().into_sheaf();
    let (name, pages, degeneration) = match filtration {
        FiltrationKind::Tau => {
            let pages = ht_pages(&k, r_max)?
                .into_iter()
                .map(|p| SSPage {
                    r: p.r,
                    entries: p.entries,
                    differentials: p.differentials,
                })
                .collect();
            ("tau", pages, degeneration_check_ht(&k)?)
        }
        FiltrationKind::Hodge => {
            let fc = hodge_filtration(&k)?;
            let f = fc.ambient.ring().clone();
            let pages = fc.pages(r_max).iter().skip(1).map(|p| p.to_json(&f)).collect();
            ("hodge", pages, degeneration_check_hdr(&k)?)
        }
    };
    Ok(SsReport {
        command: "ss",
        id: id.to_string(),
        filtration: name,
        pages,
        degeneration,
    })
}

fn single(path: &str, command: &str) -> Result<(String, AnyInstance), Outcome> {
    let mut loaded = load(path).map_err(|e| Outcome::failure(code_of(&e), command, e.to_string()))?;
    if loaded.len() != 1 {
        return Err(Outcome::failure(
            EXIT_INPUT,
            command,
            format!("expected one instance, found {}", loaded.len()),
        ));
    }
    Ok(loaded.remove(0))
}

fn cmd_ss(path: &str, filtration: FiltrationKind, r_max: usize) -> Outcome {
    let (id, inst) = match single(path, "ss") {
        Ok(x) => x,
        Err(o) => return o,
    };
    match on_any!(&inst, k => ss_report(&id, k, filtration, r_max)) {
        Ok(report) => {
            let text = render::pages(&report.pages, report.degeneration.degenerates);
            Outcome::new(EXIT_PASS, text, &report)
        }
        Err(e) => Outcome::failure(code_of(&e), "ss", e.to_string()),
    }
}

// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct Group {
    i: i64,
    module: String,
    structure: FGModuleJson,
}

#[derive(Serialize)]
struct CohomologyReport {
    command: &'static str,
    id: String,
    ring: RingSpec,
    groups: Vec<Group>,
}

fn groups<R: CoeffRing>(k: &Complex<R>) -> Vec<Group> {
    let r = k.ring();
    (k.lo()..=k.hi())
        .map(|i| {
            let h = k.cohomology(i);
            Group {
                i,
                module: h.display(r),
                structure: h.to_json(r),
            }
        })
        .collect()
}

fn cohomology_report<R: CoeffRing>(id: &str, inst: &Instance<R>) -> Result<CohomologyReport, Error> {
    inst.validate()?;
    let g = global_sections(&inst.clone().into_sheaf());
    Ok(CohomologyReport {
        command: "cohomology",
        id: id.to_string(),
        ring: g.ring().spec(),
        groups: groups(&g),
    })
}

fn cmd_cohomology(path: &str) -> Outcome {
    let (id, inst) = match single(path, "cohomology") {
        Ok(x) => x,
        Err(o) => return o,
    };
    match on_any!(&inst, k => cohomology_report(&id, k)) {
        Ok(report) => {
            let text = render::groups(report.groups.iter().map(|g| (g.i, g.module.as_str())));
            Outcome::new(EXIT_PASS, text, &report)
        }
        Err(e) => Outcome::failure(code_of(&e), "cohomology", e.to_string()),
    }
}

#[derive(Serialize)]
struct EtaReport {
    command: &'static str,
    id: String,
    m: i64,
    eta: InstanceJson,
    cohomology: Vec<Group>,
}

fn eta_report<R: CoeffRing>(id: &str, inst: &Instance<R>, m: i64) -> Result<EtaReport, Error> {
    inst.validate()?;
    let (eta, cohomology) = match inst {
        Instance::Complex(k) => {
            let e = eta_m(k, m)?;
            (Instance::Complex(e.complex.clone()).to_json(), groups(&e.complex))
        }
        Instance::Sheaf(s) => {
            let e = sheaf_eta_m(s, m)?;
            (InstanceJson::Sheaf(SheafJson::from_sheaf(&e.sheaf)), groups(&global_sections(&e.sheaf)))
        }
    };
    Ok(EtaReport {
        command: "eta",
        id: id.to_string(),
        m,
        eta,
        cohomology,
    })
}

fn cmd_eta(path: &str, m: i64) -> Outcome {
    let (id, inst) = match single(path, "eta") {
        Ok(x) => x,
        Err(o) => return o,
    };
    match on_any!(&inst, k => eta_report(&id, k, m)) {
        Ok(report) => {
            let text = render::groups(report.cohomology.iter().map(|g| (g.i, g.module.as_str())));
            Outcome::new(EXIT_PASS, text, &report)
        }
        Err(e) => Outcome::failure(code_of(&e), "eta", e.to_string()),
    }
}

fn cmd_generate(cli: &Cli, profile: Profile) -> Outcome {
    match generated(cli, profile) {
        Ok(list) => {
            let json: Vec<InstanceJson> = list.iter().map(|(_, inst)| on_any!(inst, k => k.to_json())).collect();
            let out = Outcome::new(EXIT_PASS, String::new(), &json);
            Outcome {
                text: out.json.clone(),
                ..out
            }
        }
        Err(e) => Outcome::failure(code_of(&e), "generate", e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    #[test]
    fn unknown_builtin_is_an_input_error() {
        let cli = Cli::parse_from(["decalage", "generate", "--poset", "builtin:torus"]);
        assert_eq!(run(&cli).code, EXIT_INPUT);
    }

    #[test]
    fn ring_of_generated_instance() {
        let cli = Cli::parse_from(["decalage", "generate", "--ring", "fp-poly", "--char", "3"]);
        let list = generated(&cli, Profile::Free).unwrap();
        let AnyInstance::FpPoly(Instance::Complex(k)) = &list[0].1 else {
            panic!("expected a complex over F_3[t]")
        };
        assert_eq!(k.ring().spec(), RingSpec::FpPoly { p: 3, xi: "t".into() });
    }
}
