//! The `cequant` command line: JSON in, JSON out.
//!
//! Exit codes: 0 success, 1 a verification or geodesic check failed,
//! 2 critical resonance, 3 parse or validation error.

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::codec::{self, JetDoc, PolyDoc};
use crate::curved::{geodesic_flow_check, MetricJet};
use crate::error::{Error, Result};
use crate::invariants::{casimir_operators, casimir_symbols};
use crate::jet::TaylorJet;
use crate::poly::{Signature, SymbolPolynomial, VarKind, Weights};
use crate::quantizer::Quantizer;
use crate::resonance::{enumerate_sigma, probe_critical, sigma_values};
use crate::scalar::Rational;
use crate::star::{StarProduct, StarTruncation};
use crate::verify::{run_suite, Suite, SuiteConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_RESONANCE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "cequant", version, about = "Exact conformally equivariant quantization on flat space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct SigArgs {
    /// Dimension (taken from the payload when omitted)
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of positive metric entries
    #[arg(long)]
    pub p: Option<usize>,
    /// Number of negative metric entries
    #[arg(long)]
    pub q: Option<usize>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct WeightArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    /// μ − λ; may replace --mu
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<String>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct OutArgs {
    /// Write the result here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Form {
    /// σ(Q(P)) with the iħ scaling of the ξ-degree
    Hbar,
    /// the bare intertwiner on unscaled symbols
    Tilde,
    /// the graded map, returned as a symbol
    Graded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CasimirKind {
    Symbols,
    Operators,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Quantize a symbol read from --in (or stdin)
    Quantize {
        #[command(flatten)]
        sig: SigArgs,
        #[command(flatten)]
        weights: WeightArgs,
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "hbar")]
        form: Form,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Star product of {"left": symbol, "right": symbol}
    Star {
        #[command(flatten)]
        sig: SigArgs,
        #[arg(long, allow_hyphen_values = true, default_value = "1/2")]
        lambda: String,
        /// Highest ħ-power kept
        #[arg(long, default_value_t = 2)]
        order: u32,
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Resonant values δ_{k,ℓ;s,t} for k ≤ max-k
    Resonances {
        #[command(flatten)]
        sig: SigArgs,
        #[arg(long = "max-k")]
        max_k: u32,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Decide which resonances obstruct the quantization at given weights
    Probe {
        #[command(flatten)]
        sig: SigArgs,
        #[command(flatten)]
        weights: WeightArgs,
        #[arg(long = "max-k")]
        max_k: u32,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Casimir operator in closed form, or applied to a symbol from --in
    Casimir {
        #[command(flatten)]
        sig: SigArgs,
        #[command(flatten)]
        weights: WeightArgs,
        #[arg(long, value_enum, default_value = "symbols")]
        kind: CasimirKind,
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run a self-check suite
    Verify {
        #[arg(long)]
        suite: String,
        #[command(flatten)]
        sig: SigArgs,
        #[command(flatten)]
        weights: WeightArgs,
        /// Maximal ξ-degree of random symbols
        #[arg(long, default_value_t = 3)]
        degree: u32,
        #[arg(long = "x-degree", default_value_t = 2)]
        x_degree: u32,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long = "max-k", default_value_t = 4)]
        max_k: u32,
        #[arg(long)]
        order: Option<u32>,
        #[arg(long, env = "CEQUANT_SEED", default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Quantized geodesic flow against the conformal Laplacian, for a
    /// conformal factor read from --in or drawn at random
    Geodesic {
        #[command(flatten)]
        sig: SigArgs,
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Jet order of a random conformal factor
        #[arg(long, default_value_t = 4)]
        order: u32,
        #[arg(long, env = "CEQUANT_SEED", default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
}

struct Outcome {
    value: Value,
    code: i32,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome { value, code: EXIT_OK }
    }
}

fn rational(flag: &str, s: &str) -> Result<Rational> {
    codec::parse_rational(s).map_err(|_| Error::Parse(format!("--{flag}: not a rational number: {s:?}")))
}

impl SigArgs {
    /// Combines the flags with the signature carried by a payload.
    fn resolve(&self, payload: Option<Signature>) -> Result<Signature> {
        let from_flags = match (self.p, self.q) {
            (Some(p), q) => {
                let q = q.unwrap_or(0);
                if let Some(n) = self.n {
                    if n != p + q {
                        return Err(Error::Argument(format!("--n {n} disagrees with --p {p} --q {q}")));
                    }
                }
                Some(Signature::new(p, q)?)
            }
            (None, Some(q)) => {
                let n = self.n.ok_or_else(|| Error::Argument("--q needs --n or --p".into()))?;
                if q > n {
                    return Err(Error::Argument(format!("--q {q} exceeds --n {n}")));
                }
                Some(Signature::new(n - q, q)?)
            }
            (None, None) => match (self.n, payload) {
                (Some(n), Some(s)) if s.n() == n => Some(s),
                (Some(n), _) => Some(Signature::euclidean(n)?),
                (None, _) => None,
            },
        };
        match (from_flags, payload) {
            (Some(f), Some(s)) if f != s => Err(Error::Argument(format!(
                "signature ({},{}) from flags disagrees with ({},{}) in the payload",
                f.p(),
                f.q(),
                s.p(),
                s.q()
            ))),
            (Some(f), _) => Ok(f),
            (None, Some(s)) => Ok(s),
            (None, None) => Err(Error::Argument("the dimension is required: pass --n (and --p/--q)".into())),
        }
    }
}

impl WeightArgs {
    fn lambda(&self) -> Result<Option<Rational>> {
        self.lambda.as_deref().map(|s| rational("lambda", s)).transpose()
    }

    fn delta(&self) -> Result<Option<Rational>> {
        let lambda = self.lambda()?;
        let mu = self.mu.as_deref().map(|s| rational("mu", s)).transpose()?;
        let delta = self.delta.as_deref().map(|s| rational("delta", s)).transpose()?;
        match (lambda, mu, delta) {
            (Some(l), Some(m), Some(d)) if &m - &l != d => Err(Error::Argument("--delta must equal --mu minus --lambda".into())),
            (Some(l), Some(m), _) => Ok(Some(&m - &l)),
            (_, None, Some(d)) => Ok(Some(d)),
            (None, Some(_), _) => Err(Error::Argument("--mu needs --lambda".into())),
            (_, None, None) => Ok(None),
        }
    }

    fn weights(&self) -> Result<Option<Weights>> {
        match (self.lambda()?, self.delta()?) {
            (Some(l), Some(d)) => Ok(Some(Weights::from_delta(l, d))),
            (Some(l), None) => Ok(Some(Weights::equal(l))),
            (None, None) => Ok(None),
            (None, Some(_)) => Err(Error::Argument("--lambda is required with --delta".into())),
        }
    }

    fn require(&self) -> Result<Weights> {
        self.weights()?.ok_or_else(|| Error::Argument("weights are required: pass --lambda with --mu or --delta".into()))
    }
}

fn read_payload(path: Option<&PathBuf>, stdin: &mut dyn Read) -> Result<String> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::read_to_string(p).map_err(|e| Error::Parse(format!("cannot read {}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).map_err(|e| Error::Parse(format!("cannot read stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn poly_payload(text: &str) -> Result<(SymbolPolynomial, Signature)> {
    codec::decode_poly(&codec::from_json::<PolyDoc>(text)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PairDoc {
    left: PolyDoc,
    right: PolyDoc,
}

fn poly_value(p: &SymbolPolynomial, sig: &Signature, role: &str) -> Value {
    serde_json::to_value(codec::encode_poly(p, sig, Some(role))).expect("serializable")
}

fn execute(cmd: &Command, stdin: &mut dyn Read) -> Result<Outcome> {
    match cmd {
        Command::Quantize { sig, weights, input, form, .. } => {
            let w = weights.require()?;
            let (p, payload_sig) = poly_payload(&read_payload(input.as_ref(), stdin)?)?;
            let s = sig.resolve(Some(payload_sig))?;
            let quant = Quantizer::new(&s, &w);
            let value = match form {
                Form::Hbar => poly_value(quant.quantize(&p)?.body(), &s, "operator"),
                Form::Tilde => poly_value(&quant.apply_tilde(&p)?, &s, "operator"),
                Form::Graded => poly_value(&quant.quantize_graded(&p)?, &s, "symbol"),
            };
            Ok(Outcome::ok(value))
        }
        Command::Star { sig, lambda, order, input, .. } => {
            let lambda = rational("lambda", lambda)?;
            let pair: PairDoc = codec::from_json(&read_payload(input.as_ref(), stdin)?)?;
            let (a, sa) = codec::decode_poly(&pair.left)?;
            let (b, sb) = codec::decode_poly(&pair.right)?;
            if sa != sb {
                return Err(Error::Argument("left and right symbols have different signatures".into()));
            }
            let s = sig.resolve(Some(sa))?;
            let product = StarProduct::new(&StarTruncation::new(*order, lambda), &s).product(&a, &b)?;
            Ok(Outcome::ok(poly_value(&product, &s, "symbol")))
        }
        Command::Resonances { sig, max_k, .. } => {
            let s = sig.resolve(None)?;
            let entries = enumerate_sigma(&s, *max_k)?;
            let sigma0: Vec<_> = entries.iter().filter(|e| e.in_sigma0).cloned().collect();
            let strs = |v: Vec<Rational>| v.iter().map(Rational::to_string).collect::<Vec<_>>();
            let list: Vec<Value> = entries
                .iter()
                .map(|e| json!({"k": e.k, "l": e.l, "s": e.s, "t": e.t, "delta": e.delta.to_string(), "in_sigma0": e.in_sigma0}))
                .collect();
            Ok(Outcome::ok(json!({
                "n": s.n(),
                "max_k": max_k,
                "values": strs(sigma_values(&entries)),
                "sigma0_values": strs(sigma_values(&sigma0)),
                "entries": list,
            })))
        }
        Command::Probe { sig, weights, max_k, .. } => {
            let s = sig.resolve(None)?;
            let w = weights.require()?;
            let report: Vec<Value> = probe_critical(&s, &w, *max_k)
                .into_iter()
                .map(|e| {
                    let mut v = json!({"k": e.k, "s": e.s, "status": e.status.to_string(), "checked": e.checked});
                    if let Some(wit) = e.witness {
                        v["witness"] = json!({"l": wit.l, "t": wit.t, "element": poly_value(&wit.element, &s, "symbol")});
                    }
                    v
                })
                .collect();
            Ok(Outcome::ok(Value::Array(report)))
        }
        Command::Casimir { sig, weights, kind, input, .. } => {
            let payload = match input {
                Some(path) => Some(poly_payload(&read_payload(Some(path), stdin)?)?),
                None => None,
            };
            let s = sig.resolve(payload.as_ref().map(|(_, s)| *s))?;
            let op = match kind {
                CasimirKind::Symbols => {
                    let delta = weights.delta()?.ok_or_else(|| Error::Argument("pass --delta, or --lambda with --mu".into()))?;
                    casimir_symbols(&s, &delta)
                }
                CasimirKind::Operators => casimir_operators(&s, &weights.require()?),
            };
            let value = match payload {
                Some((p, _)) => {
                    let role = if *kind == CasimirKind::Symbols { "symbol" } else { "operator" };
                    poly_value(&op.apply(&p), &s, role)
                }
                None => serde_json::to_value(codec::encode_endo(&op, &s)).expect("serializable"),
            };
            Ok(Outcome::ok(value))
        }
        Command::Verify { suite, sig, weights, degree, x_degree, samples, max_k, order, seed, .. } => {
            let suite: Suite = suite.parse()?;
            let s = sig.resolve(None)?;
            let cfg = SuiteConfig {
                sig: s,
                weights: weights.weights()?,
                degree: *degree,
                x_degree: *x_degree,
                samples: *samples,
                max_k: *max_k,
                order: *order,
                seed: *seed,
            };
            let rep = run_suite(suite, &cfg)?;
            let code = if rep.passed() { EXIT_OK } else { EXIT_CHECK_FAILED };
            Ok(Outcome { value: serde_json::to_value(&rep).expect("serializable"), code })
        }
        Command::Geodesic { sig, input, order, seed, .. } => {
            let s = sig.resolve(None)?;
            let f = match input {
                Some(path) => codec::decode_jet(&codec::from_json::<JetDoc>(&read_payload(Some(path), stdin)?)?, s.n())?,
                None => TaylorJet::random_unit(&mut ChaCha8Rng::seed_from_u64(*seed), s.n(), *order, false),
            };
            let rep = geodesic_flow_check(&MetricJet::new(f.clone(), s)?)?;
            let n = s.n();
            let mismatches: Vec<Value> = rep
                .mismatches
                .iter()
                .map(|(m, a, b)| {
                    let x: Vec<u8> = (0..n).map(|i| m.get(VarKind::X, i)).collect();
                    let xi: Vec<u8> = (0..n).map(|i| m.get(VarKind::Xi, i)).collect();
                    json!({"x": x, "xi": xi, "quantized": a.to_string(), "expected": b.to_string()})
                })
                .collect();
            let value = json!({
                "pass": rep.pass(),
                "n": n,
                "p": s.p(),
                "q": s.q(),
                "jet_order": rep.jet_order,
                "compared_order": rep.compared_order,
                "factor": codec::encode_jet(&f),
                "curvature_at_origin": rep.curvature_at_origin.to_string(),
                "quantized": poly_value(&rep.quantized, &s, "operator"),
                "expected": poly_value(&rep.expected, &s, "operator"),
                "mismatches": mismatches,
            });
            Ok(Outcome { value, code: if rep.pass() { EXIT_OK } else { EXIT_CHECK_FAILED } })
        }
    }
}

fn out_path(cmd: &Command) -> Option<&PathBuf> {
    match cmd {
        Command::Quantize { out, .. }
        | Command::Star { out, .. }
        | Command::Resonances { out, .. }
        | Command::Probe { out, .. }
        | Command::Casimir { out, .. }
        | Command::Verify { out, .. }
        | Command::Geodesic { out, .. } => out.out.as_ref(),
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_resonance() {
        EXIT_RESONANCE
    } else {
        EXIT_INVALID
    }
}

/// Parses `args` (including the program name), runs the verb and returns the
/// exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INVALID,
            };
            let target: &mut dyn Write = if code == EXIT_OK { stdout } else { stderr };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(&cli.command, stdin) {
        Ok(outcome) => {
            let mut text = serde_json::to_string(&outcome.value).expect("serializable");
            text.push('\n');
            let written = match out_path(&cli.command) {
                Some(path) => fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(msg) = written {
                let _ = writeln!(stderr, "error: {msg}");
                return EXIT_INVALID;
            }
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str], input: &str) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["cequant"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut input.as_bytes(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn resonances_values() {
        let (code, out, _) = call(&["resonances", "--n", "2", "--max-k", "2"], "");
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["values"], json!(["1", "3/2", "2"]));
    }

    #[test]
    fn signature_resolution() {
        let a = SigArgs { n: Some(3), p: None, q: Some(1) };
        assert_eq!(a.resolve(None).unwrap(), Signature::new(2, 1).unwrap());
        let b = SigArgs { n: Some(3), p: Some(2), q: Some(2) };
        assert!(b.resolve(None).is_err());
        let c = SigArgs::default();
        assert_eq!(c.resolve(Some(Signature::new(1, 1).unwrap())).unwrap(), Signature::new(1, 1).unwrap());
        let d = SigArgs { n: Some(2), p: None, q: None };
        assert!(d.resolve(Some(Signature::new(1, 1).unwrap())).is_ok());
        assert!(d.resolve(Some(Signature::new(2, 1).unwrap())).is_err());
    }

    #[test]
    fn bad_flags_exit_three() {
        assert_eq!(call(&["resonances", "--n", "2"], "").0, 3);
        assert_eq!(call(&["probe", "--n", "2", "--max-k", "2", "--lambda", "1/0"], "").0, 3);
        assert_eq!(call(&["frobnicate"], "").0, 3);
        assert_eq!(call(&["--help"], "").0, 0);
    }
}
