//! `epiloc`: command-line frontend for derived localization, Tor, free
//! products and the epimorphism checks.

mod input;
mod report;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use epiloc::acceptance::{self, CRITERIA};
use epiloc::derived::{is_homological_epi, tor_dims, TorMethod};
use epiloc::freeprod::{all_filtration_quotients, free_product, is_homotopy_epi};
use epiloc::idempotent::trivial_idempotent;
use epiloc::localization::{benson_sequence_check, cofibre_check, hilbert_series_check, localize, verify_presentation, Presentation};
use epiloc::resolution::Caps;
use epiloc::{Algebra, Bimodule, Error, Idempotent, Module, Subspace};
use serde_json::{json, Value};

use report::{Format, Outcome, Report};

#[derive(Parser, Debug)]
#[command(name = "epiloc", version, about = "Derived localization at idempotents, Tor and epimorphism checks over F_p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Report format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    output: Format,
    /// Seed for randomized searches and samples.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Largest dense term of a resolution or bar complex.
    #[arg(long, default_value_t = epiloc::resolution::DEFAULT_MAX_DIM, global = true)]
    max_dim: usize,
    /// Largest dense differential, or most stored nonzeros of a sparse one.
    #[arg(long, default_value_t = epiloc::resolution::DEFAULT_MAX_ENTRIES, global = true)]
    max_term_entries: usize,
    /// Largest term of a sparse bar complex.
    #[arg(long, default_value_t = epiloc::resolution::DEFAULT_MAX_SPARSE_DIM, global = true)]
    max_sparse_dim: usize,
    /// Include wall-clock timings; reports are then no longer reproducible.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Args, Debug, Clone)]
struct GroupArgs {
    /// Bundled group name (Cn, S3, Dn, CpxCq(p,q)) or a GroupTable JSON file.
    #[arg(long)]
    group: String,
    /// The prime.
    #[arg(short = 'p', long = "prime")]
    p: u32,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Find the trivial-block primitive idempotent, or certify a candidate.
    Idempotent {
        #[command(flatten)]
        g: GroupArgs,
        /// Element to certify, e.g. "-(12)-1".
        #[arg(long)]
        candidate: Option<String>,
    },
    /// Homology ring of the derived localization at an idempotent.
    Localize {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long, default_value_t = 8)]
        max_degree: usize,
        /// Idempotent to localize at; defaults to the trivial-block one.
        #[arg(long)]
        idempotent: Option<String>,
        /// Generators with degrees, e.g. "x:2,y:3".
        #[arg(long)]
        generators: Option<String>,
        /// Relations to verify, e.g. "xy=yx,x^3=y^2".
        #[arg(long)]
        relations: Option<String>,
    },
    /// Dimensions of Tor_k(N, M) over a group algebra.
    Tor {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
        /// Right argument N.
        #[arg(long, value_enum, default_value = "trivial")]
        right: RightArg,
        /// Left argument M: trivial, regular, top2 (A/J^2) or simple:<i>.
        #[arg(long, default_value = "trivial")]
        module: String,
        #[arg(long, value_enum, default_value = "both")]
        method: MethodArg,
    },
    /// Compare the homological and homotopy epimorphism verdicts of a map.
    EpiCheck {
        /// Map file {"source", "target", "images"}.
        #[arg(long)]
        from_file: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
        #[arg(long, default_value_t = 6)]
        max_word: usize,
    },
    /// Truncated free product B *_A C and its filtration.
    FreeProduct {
        /// Map A -> B.
        #[arg(long)]
        from_file: PathBuf,
        /// Map A -> C; defaults to the first map.
        #[arg(long)]
        second: Option<PathBuf>,
        #[arg(long, default_value_t = 6)]
        max_word: usize,
        /// Products sampled for the multiplicativity check.
        #[arg(long, default_value_t = 40)]
        samples: usize,
    },
    /// The five-term exact sequence and the cofibre sequence.
    Benson {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
    },
    /// Localization dimensions against the C_p ⋊ C_q Hilbert series.
    Hilbert {
        #[command(flatten)]
        g: GroupArgs,
        /// Order of the acting cyclic group; defaults to |G| / p.
        #[arg(long)]
        q: Option<u32>,
        #[arg(long, default_value_t = 12)]
        max_degree: usize,
    },
    /// Run the acceptance criteria.
    Selftest {
        /// Criterion numbers to run; all when omitted.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RightArg {
    Trivial,
    Regular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Bar,
    Minimal,
    Both,
}

struct Timer {
    on: bool,
    marks: BTreeMap<String, u64>,
    start: Instant,
}

impl Timer {
    fn new(on: bool) -> Self {
        Timer { on, marks: BTreeMap::new(), start: Instant::now() }
    }

    fn time<T>(&mut self, label: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.marks.insert(label.to_string(), t.elapsed().as_millis() as u64);
        out
    }

    fn finish(mut self) -> Option<BTreeMap<String, u64>> {
        self.on.then(|| {
            self.marks.insert("total".into(), self.start.elapsed().as_millis() as u64);
            self.marks
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let text = out.report.render(cli.common.output);
            let _ = std::io::stdout().write_all(text.as_bytes());
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

/// Internal consistency failures are failed checks; everything else is an
/// input the engine refuses.
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Internal(_) => 1,
        _ => 2,
    }
}

fn caps(c: &Common) -> Caps {
    Caps { max_dim: c.max_dim, max_entries: c.max_term_entries, max_sparse_dim: c.max_sparse_dim }
}

fn run(cli: &Cli) -> epiloc::Result<Outcome> {
    let c = &cli.common;
    let mut timer = Timer::new(c.timings);
    let (command, inputs, results, certificates, trusted_to, passed) = match &cli.command {
        Command::Idempotent { g, candidate } => {
            let a = input::group_algebra(&g.group, g.p)?;
            let e = match candidate {
                Some(text) => Idempotent::check(&a, a.parse_element(text)?)?,
                None => trivial_idempotent(&a)?,
            };
            let results = json!({
                "algebra_dim": a.dim(),
                "idempotent": a.format_element(e.element()),
                "coordinates": e.element(),
            });
            let passed = e.is_unit() || e.is_verified();
            let inputs = json!({"group": g.group, "p": g.p, "candidate": candidate});
            ("idempotent", inputs, results, serde_json::to_value(e.certificate())?, None, passed)
        }
        Command::Localize { g, max_degree, idempotent, generators, relations } => {
            let a = input::group_algebra(&g.group, g.p)?;
            let e = chosen_idempotent(&a, idempotent.as_deref())?;
            let loc = timer.time("localize", || localize(&a, &e, *max_degree))?;
            let ring = &loc.ring;
            let presentation = match (generators, relations) {
                (None, None) => default_presentation(&a),
                (gens, rels) => Some(parse_presentation(gens.as_deref().unwrap_or("x:2,y:3"), rels.as_deref().unwrap_or(""))?),
            };
            let pres_report = presentation.as_ref().map(|pr| verify_presentation(ring, pr));
            let relation_map: serde_json::Map<String, Value> = pres_report
                .iter()
                .flat_map(|r| r.relations.iter().map(|c| (c.relation.clone(), json!(if c.holds { "pass" } else { "fail" }))))
                .collect();
            let (unital, associative) = (ring.check_unital(), ring.check_associative());
            let results = json!({
                "dims": ring.dims,
                "basis": ring.basis_labels,
                "replacement": loc.replacement.kind,
                "relations": relation_map,
            });
            let certificates = json!({
                "idempotent": e.certificate(),
                "unital": unital,
                "associative": associative,
                "squeeze_rejected": loc.replacement.squeeze_rejected,
                "presentation": pres_report,
            });
            let passed = unital && associative && pres_report.as_ref().map_or(true, |r| r.passed());
            let inputs = json!({"group": g.group, "p": g.p, "max_degree": max_degree, "idempotent": a.format_element(e.element())});
            ("localize", inputs, results, certificates, Some(ring.trusted_to), passed)
        }
        Command::Tor { g, max_degree, right, module, method } => {
            let a = input::group_algebra(&g.group, g.p)?;
            let n = match right {
                RightArg::Trivial => Bimodule::trivial_right(a.clone())?,
                RightArg::Regular => Bimodule::regular(a.clone()),
            };
            let m = left_module(&a, module)?;
            let caps = caps(c);
            let mut dims = BTreeMap::new();
            if *method != MethodArg::Minimal {
                dims.insert("bar", timer.time("bar", || tor_dims(&n, &m, *max_degree, TorMethod::Bar, &caps))?);
            }
            if *method != MethodArg::Bar {
                dims.insert("minimal", timer.time("minimal", || tor_dims(&n, &m, *max_degree, TorMethod::Minimal, &caps))?);
            }
            let agree = dims.values().all(|d| Some(d) == dims.values().next());
            let results = json!({"dims": dims.values().next(), "by_method": dims});
            let inputs = json!({"group": g.group, "p": g.p, "max_degree": max_degree, "right": format!("{right:?}").to_lowercase(), "module": module});
            ("tor", inputs, results, json!({"methods_agree": agree}), Some(*max_degree), agree)
        }
        Command::EpiCheck { from_file, max_degree, max_word } => {
            let f = input::load_map(from_file)?;
            let homological = timer.time("homological", || is_homological_epi(&f, *max_degree))?;
            let homotopy = timer.time("homotopy", || is_homotopy_epi(&f, *max_word))?;
            let agree = homotopy.is_yes().map(|h| h == homological.verdict.is_yes());
            let results = json!({
                "homological": homological.verdict,
                "homotopy": homotopy,
                "source_dim": f.source.dim(),
                "target_dim": f.target.dim(),
            });
            let certificates = json!({
                "omega_dims": homological.omega_dims,
                "multiplication_cone_dims": homological.multiplication_cone_dims,
                "tensor_dims": homological.tensor_dims,
                // is_homological_epi fails outright when the two disagree
                "omega_matches_multiplication": true,
                "verdicts_agree": agree,
            });
            let inputs = json!({"from_file": from_file, "max_degree": max_degree, "max_word": max_word});
            ("epi-check", inputs, results, certificates, Some(*max_degree), agree != Some(false))
        }
        Command::FreeProduct { from_file, second, max_word, samples } => {
            let (fb, fc) = match second {
                Some(s) => input::load_map_pair(from_file, s)?,
                None => {
                    let f = input::load_map(from_file)?;
                    (f.clone(), f)
                }
            };
            let inputs = json!({"from_file": from_file, "second": second, "max_word": max_word, "samples": samples});
            match timer.time("construct", || free_product(&fb, &fc, *max_word))? {
                Err(r) => {
                    let results = json!({"admissible": false, "reason": r.reason});
                    ("free-product", inputs, results, json!({}), None, true)
                }
                Ok(fp) => {
                    let dims = timer.time("filtration", || fp.filtration_dims(*max_word, false))?;
                    let quotients = timer.time("quotients", || all_filtration_quotients(&fp))?;
                    let mult = timer.time("multiplicativity", || fp.check_multiplicativity(*samples, c.seed));
                    let assoc = timer.time("associativity", || fp.check_associativity(*samples, c.seed));
                    let verdict = if second.is_none() { Some(is_homotopy_epi(&fb, *max_word)?) } else { None };
                    let quotients_agree = quotients.iter().all(|q| q.agree);
                    let results = json!({
                        "admissible": true,
                        "words": fp.words_up_to(*max_word),
                        "filtration_dims": dims,
                        "homotopy_epi": verdict,
                    });
                    let certificates = json!({
                        "quotients": quotients,
                        "quotients_match_formula": quotients_agree,
                        "multiplicativity": witness(&mult),
                        "associativity": witness(&assoc),
                    });
                    let trusted = quotients.iter().map(|q| q.k).max();
                    let passed = quotients_agree && mult.is_ok() && assoc.is_ok();
                    ("free-product", inputs, results, certificates, trusted, passed)
                }
            }
        }
        Command::Benson { g, max_degree } => {
            let a = input::group_algebra(&g.group, g.p)?;
            let e = trivial_idempotent(&a)?;
            let benson = timer.time("benson", || benson_sequence_check(&a, &e))?;
            let cofibre = timer.time("cofibre", || cofibre_check(&a, &e, *max_degree))?;
            let results = json!({
                "h1_dim": benson.h1_dim,
                "middle_dim": benson.middle_dim,
                "algebra_dim": benson.algebra_dim,
                "quotient_dim": benson.quotient_dim,
                "localization_dims": cofibre.localization_dims,
                "cellularization_dims": cofibre.cellularization_dims,
            });
            let passed = benson.passed() && cofibre.passed();
            let inputs = json!({"group": g.group, "p": g.p, "max_degree": max_degree});
            ("benson", inputs, results, json!({"five_term": benson, "cofibre": cofibre}), Some(*max_degree), passed)
        }
        Command::Hilbert { g, q, max_degree } => {
            let a = input::group_algebra(&g.group, g.p)?;
            let order = a.group().map_or(0, |t| t.order) as u32;
            let q = q.unwrap_or(order / g.p.max(1));
            let e = trivial_idempotent(&a)?;
            let r = timer.time("hilbert", || hilbert_series_check(&a, &e, q, *max_degree))?;
            let results = json!({
                "predicted": r.predicted,
                "computed": r.computed,
                "x_degree": r.x_degree,
                "y_degree": r.y_degree,
            });
            let passed = r.passed();
            let inputs = json!({"group": g.group, "p": g.p, "q": q, "max_degree": max_degree});
            ("hilbert", inputs, results, json!({"mismatches": r.mismatches}), Some(*max_degree), passed)
        }
        Command::Selftest { only } => {
            if let Some(bad) = only.iter().find(|&&k| k == 0 || k as usize > CRITERIA.len()) {
                return Err(Error::InvalidInput(format!("no criterion {bad}; criteria are 1 to {}", CRITERIA.len())));
            }
            let mut outcomes = Vec::new();
            for (i, criterion) in CRITERIA.iter().enumerate() {
                let k = i as u32 + 1;
                if !only.is_empty() && !only.contains(&k) {
                    continue;
                }
                let o = timer.time(&format!("criterion_{k:02}"), criterion);
                eprintln!("{}", o.line());
                outcomes.push(o);
            }
            let passed = outcomes.iter().all(|o| o.passed);
            let failed: Vec<u32> = outcomes.iter().filter(|o| !o.passed).map(|o| o.criterion).collect();
            let inputs = json!({"only": only, "battery_seed": acceptance::BATTERY_SEED});
            ("selftest", inputs, json!({"criteria": outcomes, "failed": failed}), json!({}), None, passed)
        }
    };
    let report = Report {
        command: command.to_string(),
        inputs,
        results,
        certificates,
        trusted_to,
        timings_ms: timer.finish(),
    };
    Ok(Outcome { report, passed })
}

fn witness<T: std::fmt::Debug>(r: &Result<usize, T>) -> Value {
    match r {
        Ok(n) => json!({"passed": true, "samples": n}),
        Err(w) => json!({"passed": false, "witness": format!("{w:?}")}),
    }
}

fn chosen_idempotent(a: &Arc<Algebra>, text: Option<&str>) -> epiloc::Result<Idempotent> {
    match text {
        Some(t) => Idempotent::verified(a, a.parse_element(t)?),
        None => trivial_idempotent(a),
    }
}

/// Generators `x`, `y` with the relations known for a non-abelian group
/// of order `pq`: `x^3 = y^2` for `S3` at 3, `y^2 = 0` otherwise.
fn default_presentation(a: &Algebra) -> Option<Presentation> {
    let g = a.group()?;
    let p = a.p() as usize;
    if g.is_abelian() || g.order % p != 0 {
        return None;
    }
    let q = g.order / p;
    if q < 2 || (p - 1) % q != 0 {
        return None;
    }
    let gens = [('x', 2 * q - 2), ('y', 2 * q - 1)];
    Some(if (p, q) == (3, 2) { Presentation::new(&gens, &["xy=yx", "x^3=y^2"]) } else { Presentation::new(&gens, &["xy=yx", "y^2=0"]) })
}

fn parse_presentation(generators: &str, relations: &str) -> epiloc::Result<Presentation> {
    let mut gens = Vec::new();
    for item in generators.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, deg) = item.split_once(':').ok_or_else(|| Error::Parse(format!("generator `{item}` is not name:degree")))?;
        let mut chars = name.trim().chars();
        let (Some(ch), None) = (chars.next(), chars.next()) else {
            return Err(Error::Parse(format!("generator name `{name}` must be one letter")));
        };
        let deg = deg.trim().parse().map_err(|_| Error::Parse(format!("bad degree in `{item}`")))?;
        gens.push((ch, deg));
    }
    let rels: Vec<&str> = relations.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    Ok(Presentation::new(&gens, &rels))
}

fn left_module(a: &Arc<Algebra>, spec: &str) -> epiloc::Result<Module> {
    match spec {
        "trivial" => Module::trivial(a.clone()),
        "regular" => Ok(Module::regular(a.clone())),
        "top2" => {
            let st = a.structure()?;
            let j = st.radical.vectors();
            let j2: Vec<Vec<u32>> = j.iter().flat_map(|x| j.iter().map(|y| a.mul(x, y))).collect();
            Ok(Module::regular(a.clone()).quotient(&Subspace::span(a.p(), a.dim(), &j2))?.0)
        }
        other => {
            let i: usize = other
                .strip_prefix("simple:")
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::InvalidInput(format!("unknown module `{other}`; use trivial, regular, top2 or simple:<i>")))?;
            let st = a.structure()?;
            let simples = st.simples();
            simples
                .get(i)
                .map(|m| (*m).clone())
                .ok_or_else(|| Error::InvalidInput(format!("simple:{i} out of range; there are {}", simples.len())))
        }
    }
}
