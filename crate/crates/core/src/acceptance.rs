//! The acceptance criteria as library functions, shared by the acceptance
//! test target and `epiloc selftest`. Arithmetic is exact, so every
//! comparison has zero tolerance; only the runtime bounds are numeric.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::battery::{epi_battery, free_product_instances, run_battery, summarize};
use crate::derived::{disguise, identity_cone, nakayama_check, random_free_complex, tor_dims, NakayamaVerdict, TorMethod};
use crate::freeprod::all_filtration_quotients;
use crate::idempotent::trivial_idempotent;
use crate::localization::{
    benson_sequence_check, corner_tor_inputs, hilbert_series_check, localize, verify_presentation, Presentation,
};
use crate::resolution::{squeezed_resolution, z_map, Caps};
use crate::{Algebra, Bimodule, Error, GroupTable, Idempotent, Module, Subspace};

pub const S3_RUNTIME: Duration = Duration::from_secs(60);
pub const ORDER_21_RUNTIME: Duration = Duration::from_secs(300);
pub const LOCALIZATION_DEGREE: usize = 12;
pub const Z_BOUND: usize = 10;
pub const TOR_DEGREE: usize = 10;
pub const BATTERY_SEED: u64 = 2024;
pub const BATTERY_MIN: usize = 200;
pub const VERDICT_MIN: usize = 20;
pub const MAX_WORD: usize = 6;
pub const EPI_DEGREE: usize = 6;
pub const FREE_PRODUCT_INSTANCES: usize = 40;
pub const WORD_BUDGET: usize = 400;
pub const NAKAYAMA_COMPLEXES: usize = 100;

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub criterion: u32,
    pub title: String,
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    fn new(criterion: u32, title: &str, passed: bool, detail: impl Into<String>) -> Self {
        Outcome { criterion, title: title.to_string(), passed, detail: detail.into() }
    }

    /// The one-line report.
    pub fn line(&self) -> String {
        format!("{} criterion {}: {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.criterion, self.title, self.detail)
    }
}

pub type Criterion = fn() -> Outcome;

/// Every criterion in order.
pub const CRITERIA: [Criterion; 10] = [
    criterion_01_s3_localization,
    criterion_02_z_map_law,
    criterion_03_benson_sequence,
    criterion_04_tor_formula,
    criterion_05_epimorphism_agreement,
    criterion_06_filtration,
    criterion_07_omega_versus_multiplication,
    criterion_08_resolution_independence,
    criterion_09_nakayama,
    criterion_10_hilbert_series,
];

fn group_algebra(name: &str, p: u32) -> Arc<Algebra> {
    Arc::new(Algebra::group_algebra(&GroupTable::from_name(name).unwrap(), p).unwrap())
}

fn s3_idempotent(a: &Arc<Algebra>, t: &str) -> Idempotent {
    Idempotent::verified(a, a.parse_element(&format!("-{t}-1")).unwrap()).unwrap()
}

/// The two groups with their localizing idempotents.
fn localization_cases() -> Vec<(&'static str, Arc<Algebra>, Idempotent)> {
    let s3 = group_algebra("S3", 3);
    let e = s3_idempotent(&s3, "(12)");
    let m = group_algebra("CpxCq(7,3)", 7);
    let f = trivial_idempotent(&m).unwrap();
    vec![("S3/F3", s3, e), ("C7xC3/F7", m, f)]
}

pub fn criterion_01_s3_localization() -> Outcome {
    let a = group_algebra("S3", 3);
    let expected: Vec<usize> = (0..=LOCALIZATION_DEGREE).map(|n| usize::from(n != 1)).collect();
    let pres = Presentation::new(&[('x', 2), ('y', 3)], &["xy=yx", "x^3=y^2"]);
    let mut problems = Vec::new();
    let mut slowest = Duration::ZERO;
    for t in ["(12)", "(13)", "(23)"] {
        let start = Instant::now();
        let e = s3_idempotent(&a, t);
        match localize(&a, &e, LOCALIZATION_DEGREE) {
            Ok(loc) => {
                if loc.ring.dims != expected {
                    problems.push(format!("-{t}-1: dims {:?}", loc.ring.dims));
                }
                let rep = verify_presentation(&loc.ring, &pres);
                if !rep.passed() {
                    problems.push(format!("-{t}-1: presentation {:?}", rep.relations));
                }
            }
            Err(err) => problems.push(format!("-{t}-1: {err}")),
        }
        slowest = slowest.max(start.elapsed());
    }
    if slowest > S3_RUNTIME {
        problems.push(format!("runtime {slowest:?}"));
    }
    let detail = if problems.is_empty() {
        format!("dims 1,0,1,...,1 to degree {LOCALIZATION_DEGREE} and xy=yx, x^3=y^2 for all three idempotents ({slowest:?} each at most)")
    } else {
        problems.join("; ")
    };
    Outcome::new(1, "S3 localization", problems.is_empty(), detail)
}

pub fn criterion_02_z_map_law() -> Outcome {
    let a = group_algebra("S3", 3);
    let e = s3_idempotent(&a, "(12)");
    let res = squeezed_resolution(&a, &e, Z_BOUND + 2).unwrap();
    let mut checked = 0;
    let mut problems = Vec::new();
    for m in 2..=Z_BOUND {
        for n in 2..=Z_BOUND - m {
            let (zm, zn, zmn) = (z_map(&res, m).unwrap(), z_map(&res, n).unwrap(), z_map(&res, m + n).unwrap());
            for (label, comp) in [("z(m) after z(n)", zn.proj.then(&a, &zm.proj).unwrap()), ("z(n) after z(m)", zm.proj.then(&a, &zn.proj).unwrap())] {
                if comp.shift != zmn.proj.shift || comp.components != zmn.proj.components {
                    problems.push(format!("m={m}, n={n}: {label}"));
                }
            }
            checked += 1;
        }
    }
    let ok = problems.is_empty() && checked > 0;
    let detail = if ok { format!("{checked} pairs (m, n) with m + n <= {Z_BOUND} equal on the nose") } else { problems.join("; ") };
    Outcome::new(2, "z-map law", ok, detail)
}

pub fn criterion_03_benson_sequence() -> Outcome {
    let mut problems = Vec::new();
    let mut notes = Vec::new();
    for (name, a, e) in localization_cases() {
        let start = Instant::now();
        match benson_sequence_check(&a, &e) {
            Ok(r) => {
                let elapsed = start.elapsed();
                let predicted = r.algebra_dim - 1 + r.h1_dim;
                if !r.passed() {
                    problems.push(format!("{name}: {:?}", r.failures));
                }
                if r.quotient_dim != 1 || r.middle_dim != predicted {
                    problems.push(format!("{name}: middle {} vs dim A - 1 + dim H_1 = {predicted}", r.middle_dim));
                }
                if name.starts_with("S3") && r.middle_dim != 5 {
                    problems.push(format!("{name}: middle {}", r.middle_dim));
                }
                if elapsed > ORDER_21_RUNTIME {
                    problems.push(format!("{name}: runtime {elapsed:?}"));
                }
                notes.push(format!("{name} middle {} exact ({elapsed:?})", r.middle_dim));
            }
            Err(err) => problems.push(format!("{name}: {err}")),
        }
    }
    let ok = problems.is_empty();
    Outcome::new(3, "Benson sequence", ok, if ok { notes.join(", ") } else { problems.join("; ") })
}

pub fn criterion_04_tor_formula() -> Outcome {
    let caps = Caps::default();
    let mut problems = Vec::new();
    let mut notes = Vec::new();
    for (name, a, e) in localization_cases() {
        let loc = match localize(&a, &e, TOR_DEGREE) {
            Ok(l) => l.ring.dims,
            Err(err) => {
                problems.push(format!("{name}: localization {err}"));
                continue;
            }
        };
        let (n, m) = corner_tor_inputs(&a, &e).unwrap();
        let minimal = tor_dims(&n, &m, TOR_DEGREE - 1, TorMethod::Minimal, &caps);
        let bar = tor_dims(&n, &m, TOR_DEGREE - 1, TorMethod::Bar, &caps);
        match &minimal {
            Ok(t) if (2..=TOR_DEGREE).all(|k| loc[k] == t[k - 1]) => {}
            Ok(t) => problems.push(format!("{name}: H(L_e A) {loc:?} vs minimal Tor {t:?}")),
            Err(err) => problems.push(format!("{name}: minimal {err}")),
        }
        match (&bar, &minimal) {
            (Ok(b), Ok(t)) if b == t => notes.push(format!("{name} three-way")),
            (Ok(b), _) => problems.push(format!("{name}: bar Tor {b:?}")),
            (Err(Error::ResourceCap { cap, degree, reached }), _) => problems.push(format!(
                "{name}: bar complex over the corner exceeds the cap {cap} at degree {degree}; complete through {reached} of {}",
                TOR_DEGREE - 1
            )),
            (Err(err), _) => problems.push(format!("{name}: bar {err}")),
        }
    }
    let ok = problems.is_empty();
    Outcome::new(4, "Tor formula", ok, if ok { notes.join(", ") } else { problems.join("; ") })
}

pub fn criterion_05_epimorphism_agreement() -> Outcome {
    let battery = epi_battery(BATTERY_SEED).unwrap();
    let records = run_battery(&battery, MAX_WORD, EPI_DEGREE).unwrap();
    let s = summarize(&records);
    let definite = s.yes + s.no;
    let ok = definite >= BATTERY_MIN && s.yes >= VERDICT_MIN && s.no >= VERDICT_MIN && s.disagreements.is_empty();
    let detail = format!(
        "{definite} admissible instances with definite verdicts ({} yes, {} no), disagreements {:?}",
        s.yes, s.no, s.disagreements
    );
    Outcome::new(5, "homotopy vs homological epimorphism", ok, detail)
}

pub fn criterion_06_filtration() -> Outcome {
    let instances = free_product_instances(BATTERY_SEED, FREE_PRODUCT_INSTANCES, WORD_BUDGET).unwrap();
    let mut problems = Vec::new();
    let mut products = 0;
    for inst in &instances {
        match all_filtration_quotients(&inst.product) {
            Ok(q) => {
                if let Some(bad) = q.iter().find(|c| !c.agree) {
                    problems.push(format!("{}: k={} direct {} formula {}", inst.name, bad.k, bad.direct, bad.formula));
                }
            }
            Err(err) => problems.push(format!("{}: {err}", inst.name)),
        }
        match inst.product.check_multiplicativity(40, BATTERY_SEED) {
            Ok(n) => products += n,
            Err((u, v)) => problems.push(format!("{}: F_n F_k not in F_(n+k) for {u:?}, {v:?}", inst.name)),
        }
    }
    let ok = problems.is_empty() && instances.len() == FREE_PRODUCT_INSTANCES;
    let detail = if ok {
        format!("{} instances, all quotients match the tensor formula, {products} sampled products respect the filtration", instances.len())
    } else {
        problems.join("; ")
    };
    Outcome::new(6, "free product filtration", ok, detail)
}

pub fn criterion_07_omega_versus_multiplication() -> Outcome {
    let battery = epi_battery(BATTERY_SEED).unwrap();
    let records = run_battery(&battery, MAX_WORD, EPI_DEGREE).unwrap();
    let s = summarize(&records);
    let undecided: Vec<&str> = records.iter().filter(|r| r.homological.is_none()).map(|r| r.name.as_str()).collect();
    let ok = s.omega_cone_mismatches.is_empty() && undecided.is_empty();
    let detail = format!(
        "{} instances ({} inadmissible for free products), mismatches {:?}, undecided {:?}",
        s.instances,
        s.instances - s.admissible,
        s.omega_cone_mismatches,
        undecided
    );
    Outcome::new(7, "Omega^L versus multiplication map", ok, detail)
}

/// Simple modules, the regular module and `A/J^2`.
fn test_modules(a: &Arc<Algebra>) -> Vec<(String, Module)> {
    let st = a.structure().unwrap();
    let mut out: Vec<(String, Module)> = st.simples().into_iter().enumerate().map(|(i, s)| (format!("simple {i}"), s.clone())).collect();
    out.push(("regular".into(), Module::regular(a.clone())));
    let j = st.radical.vectors();
    let j2: Vec<Vec<u32>> = j.iter().flat_map(|x| j.iter().map(|y| a.mul(x, y))).collect();
    let reg = Module::regular(a.clone());
    let (top2, _) = reg.quotient(&Subspace::span(a.p(), a.dim(), &j2)).unwrap();
    out.push(("A/J^2".into(), top2));
    out
}

pub fn criterion_08_resolution_independence() -> Outcome {
    let caps = Caps::default();
    let mut problems = Vec::new();
    let mut compared = 0;
    for (g, p) in [("C3", 3), ("S3", 3), ("CpxCq(7,3)", 7)] {
        let a = group_algebra(g, p);
        let sides = [("F_p", Bimodule::trivial_right(a.clone()).unwrap()), ("A", Bimodule::regular(a.clone()))];
        for (mname, m) in test_modules(&a) {
            for (nname, n) in &sides {
                let bar = tor_dims(n, &m, TOR_DEGREE, TorMethod::Bar, &caps);
                let min = tor_dims(n, &m, TOR_DEGREE, TorMethod::Minimal, &caps);
                match (bar, min) {
                    (Ok(b), Ok(t)) if b == t => compared += 1,
                    (Ok(b), Ok(t)) => problems.push(format!("{g}, Tor({nname}, {mname}): bar {b:?} minimal {t:?}")),
                    (Err(Error::ResourceCap { cap, degree, reached }), _) => problems.push(format!(
                        "{g}, Tor({nname}, {mname}): bar complex exceeds the cap {cap} at degree {degree}; complete through {reached}"
                    )),
                    (Err(e), _) | (_, Err(e)) => problems.push(format!("{g}, Tor({nname}, {mname}): {e}")),
                }
            }
        }
    }
    let ok = problems.is_empty();
    let detail = if ok { format!("{compared} Tor sequences agree to degree {TOR_DEGREE}") } else { format!("{compared} agree; {}", problems.join("; ")) };
    Outcome::new(8, "bar versus minimal resolution", ok, detail)
}

pub fn criterion_09_nakayama() -> Outcome {
    let mut problems = Vec::new();
    let (mut holds, mut empty) = (0, 0);
    for (g, seed) in [("C3", 31u64), ("C9", 91)] {
        let a = group_algebra(g, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in 0..NAKAYAMA_COMPLEXES {
            // every third complex is a disguised contractible cone
            let c = random_free_complex(&a, &mut rng, 1 + i % 4, 3).unwrap();
            let c = if i % 3 == 0 { disguise(&identity_cone(&c).unwrap(), &mut rng).unwrap() } else { c };
            match nakayama_check(&a, &c) {
                Ok(NakayamaVerdict::Holds) => holds += 1,
                Ok(NakayamaVerdict::HypothesisEmpty { .. }) => empty += 1,
                Ok(NakayamaVerdict::Violated { degree }) => problems.push(format!("{g} #{i}: violated in degree {degree}")),
                Err(err) => problems.push(format!("{g} #{i}: {err}")),
            }
        }
    }
    let ok = problems.is_empty() && holds > 0;
    let detail = format!("{} complexes: {holds} with the hypothesis, all acyclic; {empty} with homology after reduction; {:?}", 2 * NAKAYAMA_COMPLEXES, problems);
    Outcome::new(9, "Nakayama property", ok, detail)
}

pub fn criterion_10_hilbert_series() -> Outcome {
    let mut problems = Vec::new();
    let mut notes = Vec::new();
    for (g, p, q) in [("S3", 3u32, 2u32), ("CpxCq(7,3)", 7, 3)] {
        let a = group_algebra(g, p);
        let e = trivial_idempotent(&a).unwrap();
        match hilbert_series_check(&a, &e, q, LOCALIZATION_DEGREE) {
            Ok(r) if r.passed() => notes.push(format!("({p},{q}) exact to degree {LOCALIZATION_DEGREE}")),
            Ok(r) => problems.push(format!("({p},{q}) flagged mismatch in degrees {:?}: predicted {:?} computed {:?}", r.mismatches, r.predicted, r.computed)),
            Err(err) => problems.push(format!("({p},{q}): {err}")),
        }
    }
    let ok = problems.is_empty();
    Outcome::new(10, "Hilbert series", ok, if ok { notes.join(", ") } else { problems.join("; ") })
}
