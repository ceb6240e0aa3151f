//! Command dispatch for the `peiffer` binary. Each command parses its
//! inputs, calls the library and formats the result.

pub mod files;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;
use serde_json::json;

use peiffer::campaign::{fuzz_peiffer, FuzzConfig};
use peiffer::functors::{verify_sequences, FreeAbelian};
use peiffer::grammar::identifiers;
use peiffer::oracle::{lcs_degree, magnus_expand, shadow_of_i3, LcsDegree, Shadow};
use peiffer::random::SequenceSampler;
use peiffer::wu::{sphere_generator_word, wu_bracket_generators, wu_presentation};
use peiffer::{cross_effect3, lambda2, lambda3, Alphabet, ColoredPresentation, Word};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Reduce { word: String },
    CheckSeq { pres: PathBuf, seq: PathBuf },
    Blocks { pres: PathBuf, seq: PathBuf },
    Lambda2 { pres: PathBuf, seq: PathBuf },
    Lambda3 { pres: PathBuf, seq: PathBuf },
    CrossEffect { pres: PathBuf, a: PathBuf, b: PathBuf },
    FuzzPeiffer { pres: PathBuf },
    Magnus { word: String, modular: bool },
    GammaDegree { word: String },
    Shadow { pres: PathBuf, words: Vec<String> },
    Congruent { pres: PathBuf, u: String, v: String },
    WuGens { n: usize, max_len: usize },
    WuPresentation { n: usize },
    SphereGen { k: usize },
    Functors { rank: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    /// Generator names for commands that take a bare word.
    pub gens: Option<String>,
    pub p: u32,
    pub d: usize,
    pub seed: u64,
    pub count: usize,
    pub moves: usize,
    pub budget: usize,
    pub json: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> RunConfig {
        RunConfig {
            command,
            gens: None,
            p: 2,
            d: 3,
            seed: 0,
            count: 100,
            moves: 10,
            budget: peiffer::oracle::DEFAULT_BUDGET,
            json: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    code: i32,
    text: String,
    json: serde_json::Value,
}

impl Report {
    fn ok(text: String, json: serde_json::Value) -> Report {
        Report {
            code: EXIT_OK,
            text,
            json,
        }
    }
}

fn tagged<T: Serialize>(command: &str, value: &T) -> serde_json::Value {
    let mut v = serde_json::to_value(value).expect("serializable");
    if let serde_json::Value::Object(map) = &mut v {
        map.entry("schema").or_insert(json!(1));
        map.insert("command".into(), json!(command));
    }
    v
}

pub fn run_command(cfg: &RunConfig) -> Outcome {
    match dispatch(cfg) {
        Ok(r) => {
            let stdout = if cfg.json {
                let mut s = serde_json::to_string_pretty(&r.json).expect("valid json");
                s.push('\n');
                s
            } else {
                r.text
            };
            Outcome {
                code: r.code,
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {e:#}\n"),
        },
    }
}

/// Sorts names like `x2, x10, x1` as `x1, x2, x10`.
fn natural_key(name: &str) -> (String, u64) {
    let digits = name.len() - name.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    let (stem, num) = name.split_at(name.len() - digits);
    (stem.to_string(), num.parse().unwrap_or(0))
}

fn alphabet_for(cfg: &RunConfig, text: &str) -> Result<Arc<Alphabet>> {
    let names: Vec<String> = match &cfg.gens {
        Some(g) => g
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(String::from)
            .collect(),
        None => {
            let mut ids = identifiers(text);
            ids.sort_by_key(|n| natural_key(n));
            ids
        }
    };
    Ok(Alphabet::new(names)?)
}

fn bare_word(cfg: &RunConfig, text: &str) -> Result<Word> {
    let a = alphabet_for(cfg, text)?;
    Word::parse(text, &a).with_context(|| format!("parsing `{text}`"))
}

fn load_pres(path: &Path) -> Result<Arc<ColoredPresentation>> {
    Ok(Arc::new(files::parse_presentation_file(path)?))
}

fn load_seq(pres: &Arc<ColoredPresentation>, path: &Path) -> Result<peiffer::IdentitySequence> {
    Ok(files::parse_sequence_file(path, pres)?)
}

fn build_shadow(cfg: &RunConfig, pres: Arc<ColoredPresentation>) -> Result<Shadow> {
    Ok(if pres.class_count() == 3 {
        shadow_of_i3(pres, cfg.p, cfg.d, cfg.budget)?
    } else {
        Shadow::new(pres, cfg.p, cfg.d, cfg.budget)?
    })
}

fn dispatch(cfg: &RunConfig) -> Result<Report> {
    if cfg.d == 0 {
        bail!("--deg must be at least 1");
    }
    match &cfg.command {
        Command::Reduce { word } => {
            let w = bare_word(cfg, word)?;
            Ok(Report::ok(
                format!("{w}\n"),
                json!({"schema": 1, "command": "reduce", "word": w.to_string(), "length": w.len()}),
            ))
        }
        Command::CheckSeq { pres, seq } => {
            let p = load_pres(pres)?;
            let s = load_seq(&p, seq)?;
            let valid = s.validate();
            let product = s.product();
            Ok(Report {
                code: if valid { EXIT_OK } else { EXIT_PROPERTY_FAIL },
                text: format!(
                    "{}: {} items, product {product}\n",
                    if valid { "identity sequence" } else { "not an identity sequence" },
                    s.len()
                ),
                json: json!({"schema": 1, "command": "check-seq", "valid": valid,
                             "items": s.len(), "product": product.to_string()}),
            })
        }
        Command::Blocks { pres, seq } => {
            let p = load_pres(pres)?;
            let b = load_seq(&p, seq)?.block_decompose()?;
            let names = ["r_c", "s_c", "t_c"];
            let mut text = String::new();
            for (k, w) in b.blocks.iter().enumerate() {
                writeln!(text, "{} = {w}", names[k]).unwrap();
            }
            writeln!(text, "reordered:").unwrap();
            for item in &b.reordered {
                writeln!(text, "  {item}").unwrap();
            }
            Ok(Report::ok(
                text,
                json!({"schema": 1, "command": "blocks",
                       "blocks": b.blocks.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                       "block_sizes": b.block_sizes,
                       "reordered": b.reordered.iter().map(|i| i.to_string()).collect::<Vec<_>>()}),
            ))
        }
        Command::Lambda2 { pres, seq } | Command::Lambda3 { pres, seq } => {
            let three = matches!(cfg.command, Command::Lambda3 { .. });
            let p = load_pres(pres)?;
            let s = load_seq(&p, seq)?;
            let v = if three { lambda3(&s)? } else { lambda2(&s)? };
            let spelled = if three {
                format!("[{}, {}]", v.blocks[0], v.blocks[1])
            } else {
                format!("{}", v.blocks[0])
            };
            let denominator: Vec<String> = v.denominator.iter().map(|f| f.to_string()).collect();
            Ok(Report::ok(
                format!(
                    "{}\n  = {spelled}\n  mod {}\n",
                    v.representative,
                    denominator.join(" ")
                ),
                json!({"schema": 1, "command": if three {"lambda3"} else {"lambda2"},
                       "representative": v.representative.to_string(),
                       "spelled": spelled,
                       "blocks": v.blocks.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                       "denominator": denominator}),
            ))
        }
        Command::CrossEffect { pres, a, b } => {
            let p = load_pres(pres)?;
            let (sa, sb) = (load_seq(&p, a)?, load_seq(&p, b)?);
            let w = cross_effect3(&sa, &sb)?;
            Ok(Report::ok(
                format!("{w}\n"),
                json!({"schema": 1, "command": "cross-effect", "representative": w.to_string()}),
            ))
        }
        Command::FuzzPeiffer { pres } => {
            let p = load_pres(pres)?;
            let n = p.class_count();
            if !(2..=3).contains(&n) {
                bail!("fuzz-peiffer needs 2 or 3 classes, found {n}");
            }
            let shadow = build_shadow(cfg, p.clone())?;
            let sampler = SequenceSampler::new(p);
            let report = fuzz_peiffer(
                &shadow,
                &sampler,
                FuzzConfig {
                    count: cfg.count,
                    moves: cfg.moves,
                    seed: cfg.seed,
                },
            )?;
            let mut text = format!(
                "cases {}  passed {}  failed {}  nontrivial {}  (p={}, d={}, seed={})\n",
                report.count,
                report.passed,
                report.failures.len(),
                report.nontrivial,
                cfg.p,
                cfg.d,
                cfg.seed
            );
            for f in &report.failures {
                writeln!(text, "case {} (seed {:#x}) failed", f.index, f.seed).unwrap();
            }
            Ok(Report {
                code: if report.all_passed() { EXIT_OK } else { EXIT_PROPERTY_FAIL },
                text,
                json: tagged("fuzz-peiffer", &report),
            })
        }
        Command::Magnus { word, modular } => {
            let w = bare_word(cfg, word)?;
            let p = modular.then_some(cfg.p as u64);
            let s = magnus_expand(&w, cfg.d, p);
            let rendered = s.format_with(w.alphabet());
            let terms: Vec<serde_json::Value> = s
                .terms()
                .map(|(m, c)| json!({"monomial": m.0, "coefficient": c.to_string()}))
                .collect();
            Ok(Report::ok(
                format!("{rendered}\n"),
                json!({"schema": 1, "command": "magnus", "degree": cfg.d, "modulus": p,
                       "generators": w.alphabet().generators().iter().map(|g| g.name.clone()).collect::<Vec<_>>(),
                       "series": rendered, "terms": terms}),
            ))
        }
        Command::GammaDegree { word } => {
            let w = bare_word(cfg, word)?;
            let k = lcs_degree(&w, cfg.d);
            let value = match k {
                LcsDegree::Exactly(k) => json!(k),
                LcsDegree::Exceeds(_) => json!(null),
            };
            Ok(Report::ok(
                format!("{k}\n"),
                json!({"schema": 1, "command": "gamma-degree", "degree_bound": cfg.d,
                       "lcs_degree": value, "display": k.to_string()}),
            ))
        }
        Command::Shadow { pres, words } => {
            let p = load_pres(pres)?;
            let shadow = build_shadow(cfg, p.clone())?;
            let named = words
                .iter()
                .map(|arg| {
                    let (name, expr) = arg.split_once('=').unwrap_or((arg, arg));
                    let w = Word::parse(expr, p.alphabet())
                        .with_context(|| format!("parsing `{expr}`"))?;
                    Ok((name.trim().to_string(), w))
                })
                .collect::<Result<Vec<_>>>()?;
            let r = shadow.report(&named)?;
            let mut text = String::new();
            writeln!(text, "image group order {} (p={}, d={})", r.image_order, r.p, r.d).unwrap();
            for (i, o) in r.closure_orders.iter().enumerate() {
                writeln!(text, "R{} closure order {o}", i + 1).unwrap();
            }
            for f in &r.factors {
                writeln!(
                    text,
                    "{}: orders {} and {}, commutator {}",
                    f.factor, f.left_order, f.right_order, f.commutator_order
                )
                .unwrap();
            }
            writeln!(text, "intersection order {}", r.intersection_order).unwrap();
            writeln!(
                text,
                "denominator order {} (normal in intersection: {})",
                r.denominator_order, r.denominator_normal
            )
            .unwrap();
            writeln!(text, "quotient order {}", r.quotient_order).unwrap();
            match &r.quotient_invariants {
                Some(inv) => writeln!(text, "quotient invariants {inv:?}").unwrap(),
                None => writeln!(text, "quotient is not abelian").unwrap(),
            }
            for w in &r.words {
                writeln!(
                    text,
                    "{}: coset {} order {}{}",
                    w.name,
                    w.coset,
                    w.coset_order.map_or("-".into(), |o| o.to_string()),
                    if w.generates_quotient { " (generates)" } else { "" }
                )
                .unwrap();
            }
            Ok(Report::ok(text, serde_json::to_value(&r)?))
        }
        Command::Congruent { pres, u, v } => {
            let p = load_pres(pres)?;
            let wu = Word::parse(u, p.alphabet()).with_context(|| format!("parsing `{u}`"))?;
            let wv = Word::parse(v, p.alphabet()).with_context(|| format!("parsing `{v}`"))?;
            let shadow = build_shadow(cfg, p)?;
            let c = shadow.congruent(&wu, &wv)?;
            Ok(Report {
                code: if c { EXIT_OK } else { EXIT_PROPERTY_FAIL },
                text: format!("{c}\n"),
                json: json!({"schema": 1, "command": "congruent", "p": cfg.p, "d": cfg.d,
                             "congruent": c}),
            })
        }
        Command::WuGens { n, max_len } => {
            let gens = wu_bracket_generators(*n, *max_len)?;
            let mut text = String::new();
            for g in &gens {
                writeln!(text, "{g}").unwrap();
            }
            Ok(Report::ok(
                text,
                json!({"schema": 1, "command": "wu-gens", "n": n, "max_len": max_len,
                       "count": gens.len(),
                       "words": gens.iter().map(|w| w.to_string()).collect::<Vec<_>>()}),
            ))
        }
        Command::WuPresentation { n } => {
            let wu = wu_presentation(*n)?;
            let text = wu.presentation.to_string();
            Ok(Report::ok(
                text.clone(),
                json!({"schema": 1, "command": "wu-presentation", "n": n, "presentation": text}),
            ))
        }
        Command::SphereGen { k } => {
            let w = sphere_generator_word(*k)?;
            Ok(Report::ok(
                format!("{w}\n"),
                json!({"schema": 1, "command": "sphere-gen", "k": k, "word": w.to_string(),
                       "length": w.len(),
                       "generators": w.alphabet().generators().iter().map(|g| g.name.clone()).collect::<Vec<_>>()}),
            ))
        }
        Command::Functors { rank } => {
            let r = verify_sequences(&FreeAbelian::new(*rank)).map_err(|e| anyhow!(e))?;
            let mut text = String::new();
            writeln!(text, "rank {}", r.rank).unwrap();
            writeln!(
                text,
                "SP² rank {}, Γ rank {}, P₂ rank {}, |A⊗ℤ₂| = {}",
                r.sp2_rank, r.gamma_rank, r.p2_rank, r.tensor_z2_order
            )
            .unwrap();
            for s in [&r.o1, &r.o2] {
                writeln!(text, "{}: {}", s.name, if s.exact() { "exact" } else { "NOT exact" })
                    .unwrap();
            }
            writeln!(
                text,
                "coker(SP² → Γ) invariants {:?}, order {}",
                r.cokernel_invariants, r.cokernel_order
            )
            .unwrap();
            Ok(Report {
                code: if r.exact { EXIT_OK } else { EXIT_PROPERTY_FAIL },
                text,
                json: tagged("functors", &r),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_order() {
        let mut v = vec!["x10", "x2", "x1", "a"];
        v.sort_by_key(|n| natural_key(n));
        assert_eq!(v, vec!["a", "x1", "x2", "x10"]);
    }

    #[test]
    fn reduce_and_degree() {
        let out = run_command(&RunConfig::new(Command::Reduce {
            word: "x2 x1 x1^-1".into(),
        }));
        assert_eq!(out.stdout, "x2\n");
        let mut cfg = RunConfig::new(Command::GammaDegree {
            word: "[x1,x2,x1]".into(),
        });
        cfg.d = 5;
        assert_eq!(run_command(&cfg).stdout, "3\n");
        cfg.d = 2;
        assert_eq!(run_command(&cfg).stdout, "exceeds 2\n");
    }

    #[test]
    fn bad_input_is_a_usage_error() {
        let out = run_command(&RunConfig::new(Command::Reduce { word: "[x1".into() }));
        assert_eq!(out.code, EXIT_USAGE);
        assert!(out.stderr.starts_with("error:"));
    }
}
