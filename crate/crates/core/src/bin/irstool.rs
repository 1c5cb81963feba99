//! Command-line frontend: encoding, corruption, decoding, bounds, and
//! Monte Carlo simulation with CSV output.
//!
//! Exit codes: 0 on success (a decode that reports detected_failure still
//! exits 0 — the outcome is in the JSON report), 1 on usage errors, 2 on
//! I/O or parse errors.

use clap::{Parser, Subcommand};
use collab_codes::analysis::{
    self, concat_channel_sim, decimal_string, fer_bound, fer_exact, mc_gab_failure,
    mc_irs_failure, p_fail_bound_gab, p_fail_bound_irs, parse_decimal,
};
use collab_codes::collab::{self, f_max};
use collab_codes::gabidulin::gab_decode;
use collab_codes::io::{decode_report, parse_code_spec, read_matrix, write_matrix, LoadedCode};
use collab_codes::linalg;
use collab_codes::rng::SplitMix64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "irstool", version, about = "Collaborative decoding of interleaved RS and Gabidulin codes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Encode a k x l message matrix file into an n x l codeword matrix
    Encode {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Add a seeded error to a codeword matrix file
    Corrupt {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// corrupt exactly this many distinct rows with uniform nonzero vectors
        #[arg(long)]
        rows: Option<usize>,
        /// corrupt each row independently with this probability
        #[arg(long)]
        row_prob: Option<String>,
        /// add a uniform rank-f error (Gabidulin codes only)
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Decode a received matrix file; prints a JSON report
    Decode {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
        /// recompute the full syndrome of the corrected word
        #[arg(long)]
        verify: bool,
    },
    /// Print the collaborative correcting radius min(l, d-2)
    Fmax {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        d: usize,
    },
    /// Print a failure probability bound
    Bound {
        #[arg(long, conflicts_with = "gab")]
        irs: bool,
        #[arg(long)]
        gab: bool,
        #[arg(long)]
        f: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        q: u64,
        /// extension degree (Gabidulin bound)
        #[arg(long)]
        m: Option<u32>,
        /// minimum distance; omitted means f is only checked against l
        #[arg(long)]
        d: Option<usize>,
    },
    /// Frame error rate bound curve over a p-grid (CSV)
    Ferbound {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: usize,
        /// inner frame error rates, repeatable
        #[arg(long = "p", required = true)]
        p: Vec<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Monte Carlo failure rates for fixed error weights (CSV)
    Simfail {
        #[arg(long)]
        code: PathBuf,
        /// error weight (rows for RS, rank for Gabidulin), repeatable
        #[arg(long = "f", required = true)]
        f: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Simulate the idealized concatenated channel (CSV)
    ConcatSim {
        #[arg(long)]
        code: PathBuf,
        #[arg(long = "p", required = true)]
        p: Vec<String>,
        #[arg(long, default_value_t = 10000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// FER bound curves for the (204,188) code, l = 9..15 (CSV)
    Fig1 {
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

enum CliError {
    Usage(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) => m,
        }
    }
}

fn usage<T: std::fmt::Display>(e: T) -> CliError {
    CliError::Usage(e.to_string())
}

fn io_err<T: std::fmt::Display>(e: T) -> CliError {
    CliError::Io(e.to_string())
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| io_err(format!("{}: {e}", path.display())))
}

fn load_code(path: &Path) -> Result<LoadedCode, CliError> {
    parse_code_spec(&read_file(path)?).map_err(io_err)
}

fn emit(output: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| io_err(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_prob(s: &str) -> Result<BigRational, CliError> {
    let p = parse_decimal(s).ok_or_else(|| usage(format!("invalid probability '{s}'")))?;
    if p < BigRational::zero() || p > BigRational::one() {
        return Err(usage(format!("probability {s} outside [0, 1]")));
    }
    Ok(p)
}

fn nonzero_row(field: &collab_codes::field::FieldSpec, l: usize, rng: &mut SplitMix64) -> Vec<u32> {
    let q = field.size() as u64;
    loop {
        let v: Vec<u32> = (0..l).map(|_| rng.next_below(q) as u32).collect();
        if v.iter().any(|&x| x != 0) {
            return v;
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Encode { code, input, output } => {
            let text = read_file(&input)?;
            match load_code(&code)? {
                LoadedCode::Irs(irs) => {
                    let msgs = read_matrix(irs.field(), &text).map_err(io_err)?;
                    let cw = irs.encode(&msgs).map_err(io_err)?;
                    emit(output.as_ref(), &write_matrix(&cw))
                }
                LoadedCode::Gabidulin(gab, l) => {
                    let msgs = read_matrix(gab.tower().ext(), &text).map_err(io_err)?;
                    if msgs.cols() != l {
                        return Err(io_err(format!(
                            "expected {l} columns, found {}",
                            msgs.cols()
                        )));
                    }
                    let cw = gab.encode(&msgs).map_err(io_err)?;
                    emit(output.as_ref(), &write_matrix(&cw))
                }
            }
        }
        Cmd::Corrupt { code, input, output, seed, rows, row_prob, rank } => {
            let modes = [rows.is_some(), row_prob.is_some(), rank.is_some()]
                .iter()
                .filter(|&&b| b)
                .count();
            if modes != 1 {
                return Err(usage(
                    "exactly one of --rows, --row-prob, --rank is required".to_string(),
                ));
            }
            let text = read_file(&input)?;
            let loaded = load_code(&code)?;
            let mut rng = SplitMix64::for_trial(seed, 0);
            match loaded {
                LoadedCode::Irs(irs) => {
                    let field = irs.field();
                    let mut y = read_matrix(field, &text).map_err(io_err)?;
                    if y.rows() != irs.inner().n() || y.cols() != irs.l() {
                        return Err(io_err("matrix shape does not match the code".to_string()));
                    }
                    let hit: Vec<usize> = if let Some(f) = rows {
                        if f > irs.inner().n() {
                            return Err(usage(format!("--rows {f} exceeds code length")));
                        }
                        rng.distinct_below(irs.inner().n(), f)
                    } else if let Some(ps) = row_prob {
                        let p = parse_prob(&ps)?;
                        let scaled = &p * BigRational::from_integer(num_bigint::BigInt::one() << 64);
                        let threshold =
                            num_traits::ToPrimitive::to_u128(&(scaled.numer() / scaled.denom()))
                                .unwrap();
                        (0..irs.inner().n())
                            .filter(|_| (rng.next_u64() as u128) < threshold)
                            .collect()
                    } else {
                        return Err(usage("--rank requires a Gabidulin code".to_string()));
                    };
                    for row in hit {
                        for (t, v) in nonzero_row(field, irs.l(), &mut rng).into_iter().enumerate() {
                            let add = field.add(y.get(row, t), field.element(v).unwrap());
                            y.set(row, t, add);
                        }
                    }
                    emit(output.as_ref(), &write_matrix(&y))
                }
                LoadedCode::Gabidulin(gab, l) => {
                    let Some(f) = rank else {
                        return Err(usage(
                            "Gabidulin codes take --rank (rows have no rank-metric meaning)"
                                .to_string(),
                        ));
                    };
                    let tower = gab.tower();
                    let y = read_matrix(tower.ext(), &text).map_err(io_err)?;
                    if y.rows() != gab.n() || y.cols() != l {
                        return Err(io_err("matrix shape does not match the code".to_string()));
                    }
                    if f > gab.n().min(l * tower.m() as usize) {
                        return Err(usage(format!("--rank {f} out of range")));
                    }
                    let e = analysis::sample_rank_f(tower, gab.n(), l, f, &mut rng);
                    let sum = linalg::mat_add(tower.ext(), &y, &e);
                    emit(output.as_ref(), &write_matrix(&sum))
                }
            }
        }
        Cmd::Decode { code, input, output, report, verify } => {
            let text = read_file(&input)?;
            let (status, f_star, positions, counters, corrected) = match load_code(&code)? {
                LoadedCode::Irs(irs) => {
                    let y = read_matrix(irs.field(), &text).map_err(io_err)?;
                    let out = collab::decode(&irs, &y, verify).map_err(io_err)?;
                    let corrected = out.codeword.unwrap_or(y);
                    (
                        out.status,
                        out.f_star,
                        out.error_positions.unwrap_or_default(),
                        out.counters,
                        corrected,
                    )
                }
                LoadedCode::Gabidulin(gab, l) => {
                    let y = read_matrix(gab.tower().ext(), &text).map_err(io_err)?;
                    if y.cols() != l {
                        return Err(io_err(format!("expected {l} columns, found {}", y.cols())));
                    }
                    let out = gab_decode(&gab, &y, verify).map_err(io_err)?;
                    let corrected = out.codeword.unwrap_or(y);
                    (out.status, out.f_star, Vec::new(), out.counters, corrected)
                }
            };
            if let Some(out_path) = output {
                emit(Some(&out_path), &write_matrix(&corrected))?;
            }
            let rep = decode_report(status, f_star, positions, counters);
            let json = serde_json::to_string_pretty(&rep).expect("report serializes");
            match report {
                Some(p) => emit(Some(&p), &json),
                None => {
                    println!("{json}");
                    Ok(())
                }
            }
        }
        Cmd::Fmax { l, d } => {
            if l < 1 || d < 2 {
                return Err(usage("need l >= 1 and d >= 2".to_string()));
            }
            println!("{}", f_max(l, d));
            Ok(())
        }
        Cmd::Bound { irs, gab, f, l, q, m, d } => {
            if irs == gab {
                return Err(usage("choose exactly one of --irs / --gab".to_string()));
            }
            // without --d the radius check degenerates to f <= l
            let d_eff = d.unwrap_or(l + 2);
            if gab {
                let m = m.ok_or_else(|| usage("--gab requires --m".to_string()))?;
                let v = p_fail_bound_gab(f, l, q, m, d_eff);
                if v.is_zero() || v.is_one() {
                    println!("{}", decimal_string(&v, 12));
                } else {
                    println!("{} 4*{}^-{}", decimal_string(&v, 12), q.pow(m), l + 1 - f);
                }
            } else {
                let v = p_fail_bound_irs(f, l, q, d_eff);
                if v.is_zero() || v.is_one() {
                    println!("{}", decimal_string(&v, 12));
                } else {
                    println!("{} {}^-{}", decimal_string(&v, 12), q, l + 1 - f);
                }
            }
            Ok(())
        }
        Cmd::Ferbound { n, l, q, d, p, output } => {
            let mut csv = String::from("p,fer_bound,fer_exact,fer_sim,ci_low,ci_high,trials\n");
            for ps in &p {
                let pr = parse_prob(ps)?;
                let b = fer_bound(&pr, n, l, q, d).expect("probability already validated");
                let e = fer_exact(&pr, n, l, q, d);
                csv.push_str(&format!(
                    "{},{},{},,,,\n",
                    ps.trim(),
                    decimal_string(&b, 12),
                    decimal_string(&e, 12)
                ));
            }
            emit(output.as_ref(), &csv)
        }
        Cmd::Simfail { code, f, trials, seed, output } => {
            if trials == 0 {
                return Err(usage("--trials must be positive".to_string()));
            }
            let loaded = load_code(&code)?;
            let mut csv =
                String::from("f,l,bound,exact,estimate,ci_low,ci_high,trials,miscorrections\n");
            for &fi in &f {
                let row = match &loaded {
                    LoadedCode::Irs(irs) => {
                        let (n, q, d, l) = (
                            irs.inner().n(),
                            irs.field().size() as u64,
                            irs.inner().d(),
                            irs.l(),
                        );
                        if fi < 1 || fi > n {
                            return Err(usage(format!("--f {fi} out of range")));
                        }
                        let est = mc_irs_failure(irs, fi, trials, seed);
                        let bound = p_fail_bound_irs(fi, l, q, d);
                        let exact = analysis::p_dep_exact(fi, l, q);
                        let (lo, hi) = est.wilson(1.96);
                        format!(
                            "{fi},{l},{},{},{},{lo:e},{hi:e},{trials},{}",
                            decimal_string(&bound, 12),
                            decimal_string(&exact, 12),
                            decimal_string(&est.estimate(), 12),
                            est.miscorrections
                        )
                    }
                    LoadedCode::Gabidulin(gab, l) => {
                        let tower = gab.tower();
                        if fi > gab.n().min(l * tower.m() as usize) {
                            return Err(usage(format!("--f {fi} out of range")));
                        }
                        let rep = mc_gab_failure(gab, *l, fi, trials, seed);
                        if rep.psi_mismatches != 0 {
                            return Err(io_err(format!(
                                "internal inconsistency: {} trials disagree with the rank criterion",
                                rep.psi_mismatches
                            )));
                        }
                        let bound =
                            p_fail_bound_gab(fi, *l, tower.q() as u64, tower.m(), gab.d());
                        let (lo, hi) = rep.estimate.wilson(1.96);
                        format!(
                            "{fi},{l},{},,{},{lo:e},{hi:e},{trials},{}",
                            decimal_string(&bound, 12),
                            decimal_string(&rep.estimate.estimate(), 12),
                            rep.estimate.miscorrections
                        )
                    }
                };
                csv.push_str(&row);
                csv.push('\n');
            }
            emit(output.as_ref(), &csv)
        }
        Cmd::ConcatSim { code, p, trials, seed, output } => {
            if trials == 0 {
                return Err(usage("--trials must be positive".to_string()));
            }
            let LoadedCode::Irs(irs) = load_code(&code)? else {
                return Err(usage("concat-sim expects an interleaved RS code".to_string()));
            };
            let (n, q, d, l) = (
                irs.inner().n() as u64,
                irs.field().size() as u64,
                irs.inner().d(),
                irs.l(),
            );
            let mut csv = String::from("p,fer_bound,fer_exact,fer_sim,ci_low,ci_high,trials\n");
            for ps in &p {
                let pr = parse_prob(ps)?;
                let est = concat_channel_sim(&irs, &pr, trials, seed);
                let b = fer_bound(&pr, n, l, q, d).expect("probability already validated");
                let e = fer_exact(&pr, n, l, q, d);
                let (lo, hi) = est.wilson(1.96);
                csv.push_str(&format!(
                    "{},{},{},{},{lo:e},{hi:e},{trials}\n",
                    ps.trim(),
                    decimal_string(&b, 12),
                    decimal_string(&e, 12),
                    decimal_string(&est.estimate(), 12)
                ));
            }
            emit(output.as_ref(), &csv)
        }
        Cmd::Fig1 { output } => {
            let grid = [
                "0.005", "0.0075", "0.01", "0.015", "0.02", "0.03", "0.04", "0.05", "0.07", "0.1",
            ];
            let (n, q, d) = (204u64, 256u64, 17usize);
            let mut csv =
                String::from("l,p,fer_bound,fer_exact,fer_sim,ci_low,ci_high,trials\n");
            for l in 9..=15usize {
                for ps in grid {
                    let pr = parse_decimal(ps).unwrap();
                    let b = fer_bound(&pr, n, l, q, d).unwrap();
                    let e = fer_exact(&pr, n, l, q, d);
                    csv.push_str(&format!(
                        "{l},{ps},{},{},,,,\n",
                        decimal_string(&b, 12),
                        decimal_string(&e, 12)
                    ));
                }
            }
            emit(output.as_ref(), &csv)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
