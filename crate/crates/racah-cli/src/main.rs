//! Verification front end: each subcommand runs one suite of matrix
//! identities and emits a deterministic report.
//!
//! Exit codes: 0 all checks pass, 1 at least one check failed,
//! 2 domain-validation or I/O error, 64 usage error.

mod report;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use racah_core::hypergeo::{
    difference_residual, duality_check, racah_eval, recurrence_residual, weights_and_norms,
    HypergeoError, RacahParameters, TruncationKind,
};
use racah_core::oscillator::{hahn_operators, verify_oscillator_algebra, OscillatorSpec};
use racah_core::racah_algebra::{
    build_representation, casimir_constancy, overlap_vs_racah, overlaps, spec_from_grid_parameters,
    verify_canonical_relations, CanonicalConstants, OverlapOutcome, RepresentationSpec,
};
use racah_core::su11_coupling::{
    couple, full_casimir_spectrum_check, s_operator_window_residual, si_model_operators,
    verify_kmp_relations, verify_racah_relations, WeightBlock, TRIPLE_SYMMETRIZER_CONVENTION,
};

use report::Report;

/// Default tolerances: closure relations 1e-9, KMP 1e-8,
/// overlap-vs-polynomial 1e-7 (see per-check constants below).
const TOL_CLOSURE: f64 = 1e-9;
const TOL_KMP: f64 = 1e-8;
const TOL_OVERLAP: f64 = 1e-7;
const TOL_BISPECTRAL: f64 = 1e-10;
const TOL_DUALITY: f64 = 1e-11;
const TOL_ORTHOGONALITY: f64 = 1e-10;
const TOL_OSCILLATOR: f64 = 1e-10;
const TOL_SPECTRUM: f64 = 1e-8;
const TOL_H_CONSISTENCY: f64 = 1e-10;

#[derive(Parser)]
#[command(
    name = "racah",
    version,
    about = "Verification suites for the Racah algebra, its representations, \
             Racah polynomials, su(1,1) recoupling and the singular oscillator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the representation fixed by (dim, rho, d, e1, e2, q) and
    /// verify the canonical relations, Casimir constancy and truncation.
    VerifyRep(VerifyRepArgs),
    /// Verify Racah-polynomial identities (bispectrality, orthogonality,
    /// duality) and the overlap-coefficient identification.
    Overlap(OverlapArgs),
    /// Couple three su(1,1) representations and verify the section-6
    /// Racah relations, the KMP symmetry algebra and the spectrum pattern.
    Couple(CoupleArgs),
    /// Verify the singular oscillator's ladder, cubic and Hahn relations
    /// on a degenerate level.
    Oscillator(OscillatorArgs),
}

#[derive(clap::Args)]
struct VerifyRepArgs {
    /// Representation dimension N + 1 (at least 1)
    #[arg(long)]
    dim: usize,
    #[arg(long, allow_negative_numbers = true)]
    rho: f64,
    #[arg(long, allow_negative_numbers = true)]
    d: f64,
    #[arg(long, allow_negative_numbers = true)]
    e1: f64,
    #[arg(long, allow_negative_numbers = true)]
    e2: f64,
    /// Casimir value
    #[arg(long, allow_negative_numbers = true)]
    q: f64,
    /// Write the JSON report here
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the checks table as CSV here
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Override every check tolerance
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TruncationArg {
    Alpha,
    BetaDelta,
    Gamma,
}

#[derive(clap::Args)]
struct OverlapArgs {
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    beta: f64,
    #[arg(long, allow_negative_numbers = true)]
    gamma: f64,
    #[arg(long, allow_negative_numbers = true)]
    delta: f64,
    /// Truncation level N (grid 0..N)
    #[arg(long = "N")]
    n: usize,
    /// Which truncation condition holds; auto-detected when omitted
    #[arg(long)]
    truncation: Option<TruncationArg>,
    /// Write the JSON report here
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the full overlap matrix as CSV here
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Override every check tolerance
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
}

#[derive(clap::Args)]
struct CoupleArgs {
    #[arg(long, allow_negative_numbers = true)]
    nu1: f64,
    #[arg(long, allow_negative_numbers = true)]
    nu2: f64,
    #[arg(long, allow_negative_numbers = true)]
    nu3: f64,
    /// Total quanta of the weight block
    #[arg(long)]
    quanta: usize,
    /// Restrict to one coupled block j (default: all j = 0..quanta)
    #[arg(long)]
    block: Option<usize>,
    /// Write the JSON report here
    #[arg(long)]
    json: Option<PathBuf>,
    /// Override every check tolerance
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
}

#[derive(clap::Args)]
struct OscillatorArgs {
    #[arg(long, allow_negative_numbers = true)]
    k1: f64,
    #[arg(long, allow_negative_numbers = true)]
    k2: f64,
    /// Degenerate level N (block dimension N + 1)
    #[arg(long)]
    level: usize,
    /// Write the JSON report here
    #[arg(long)]
    json: Option<PathBuf>,
    /// Override every check tolerance
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
        }
    };
    let start = Instant::now();
    let result = match cli.command {
        Command::VerifyRep(args) => cmd_verify_rep(args, start),
        Command::Overlap(args) => cmd_overlap(args, start),
        Command::Couple(args) => cmd_couple(args, start),
        Command::Oscillator(args) => cmd_oscillator(args, start),
    };
    match result {
        Ok(report) => {
            report.print_table();
            if report.all_pass() {
                0
            } else {
                1
            }
        }
        Err(message) => {
            eprintln!("error: {message}");
            2
        }
    }
}

fn write_outputs(
    report: &mut Report,
    start: Instant,
    json: &Option<PathBuf>,
    csv_payload: Option<(&PathBuf, String)>,
) -> Result<(), String> {
    report.wall_time_ms = start.elapsed().as_millis();
    if let Some(path) = json {
        std::fs::write(path, report.to_json())
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    if let Some((path, payload)) = csv_payload {
        std::fs::write(path, payload)
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    Ok(())
}

fn cmd_verify_rep(args: VerifyRepArgs, start: Instant) -> Result<Report, String> {
    if args.dim == 0 {
        return Err("--dim must be at least 1".to_string());
    }
    let n_max = args.dim - 1;
    let constants = CanonicalConstants {
        d: args.d,
        e1: args.e1,
        e2: args.e2,
    };
    let spec =
        RepresentationSpec::new(n_max, args.rho, args.q, constants).map_err(|e| e.to_string())?;
    let mut report = Report::new("verify-rep");
    report.param_usize("dim", args.dim);
    report.param_f64("rho", args.rho);
    report.param_f64("d", args.d);
    report.param_f64("e1", args.e1);
    report.param_f64("e2", args.e2);
    report.param_f64("q", args.q);
    let tol = args.tol.unwrap_or(TOL_CLOSURE);

    let m = build_representation(&spec).map_err(|e| e.to_string())?;
    let rel = verify_canonical_relations(&m, &constants).map_err(|e| e.to_string())?;
    report.check("relation_17a", rel.r17a, tol);
    report.check("relation_17b", rel.r17b, tol);
    report.check("relation_17c", rel.r17c, tol);
    let cas = casimir_constancy(&m, &constants, spec.q()).map_err(|e| e.to_string())?;
    report.check("casimir_constancy", cas, tol);
    let u0 = spec.offdiag_sq(0).map_err(|e| e.to_string())?;
    let utop = spec.offdiag_sq(n_max + 1).map_err(|e| e.to_string())?;
    report.check("truncation_u0_sq", u0.abs(), tol);
    report.check("truncation_u_top_sq", utop.abs(), tol);

    let csv = args.csv.as_ref().map(|p| (p, report.checks_csv()));
    write_outputs(&mut report, start, &args.json, csv)?;
    Ok(report)
}

fn detect_truncation(
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
    n: usize,
) -> Result<TruncationKind, String> {
    let nf = n as f64;
    for (kind, residual) in [
        (TruncationKind::Alpha, alpha + 1.0 + nf),
        (TruncationKind::BetaDelta, beta + delta + 1.0 + nf),
        (TruncationKind::Gamma, gamma + 1.0 + nf),
    ] {
        if residual.abs() <= 1e-12 {
            return Ok(kind);
        }
    }
    Err(
        "no truncation condition holds: need alpha+1 = -N, beta+delta+1 = -N or gamma+1 = -N"
            .to_string(),
    )
}

fn cmd_overlap(args: OverlapArgs, start: Instant) -> Result<Report, String> {
    let kind = match args.truncation {
        Some(TruncationArg::Alpha) => TruncationKind::Alpha,
        Some(TruncationArg::BetaDelta) => TruncationKind::BetaDelta,
        Some(TruncationArg::Gamma) => TruncationKind::Gamma,
        None => detect_truncation(args.alpha, args.beta, args.gamma, args.delta, args.n)?,
    };
    let p = RacahParameters::new(args.alpha, args.beta, args.gamma, args.delta, args.n, kind)
        .map_err(|e| e.to_string())?;
    let mut report = Report::new("overlap");
    report.param_f64("alpha", args.alpha);
    report.param_f64("beta", args.beta);
    report.param_f64("gamma", args.gamma);
    report.param_f64("delta", args.delta);
    report.param_usize("N", args.n);
    report.param_str("truncation", kind.condition());

    report.check(
        "recurrence_residual",
        recurrence_residual(&p).map_err(|e| e.to_string())?,
        args.tol.unwrap_or(TOL_BISPECTRAL),
    );
    report.check(
        "difference_residual",
        difference_residual(&p).map_err(|e| e.to_string())?,
        args.tol.unwrap_or(TOL_BISPECTRAL),
    );
    match duality_check(&p) {
        Ok(dev) => report.check("duality_residual", dev, args.tol.unwrap_or(TOL_DUALITY)),
        Err(HypergeoError::DualParametersInvalid(e)) => {
            report.convention("duality", &format!("skipped: {e}"));
        }
        Err(e) => return Err(e.to_string()),
    }
    match weights_and_norms(&p) {
        Ok((w, h)) => {
            let mut worst: f64 = 0.0;
            for n in 0..=p.n_max() {
                for m in (n + 1)..=p.n_max() {
                    let s: f64 = (0..=p.n_max())
                        .map(|x| {
                            w[x] * racah_eval(n, x, &p).unwrap_or(f64::NAN)
                                * racah_eval(m, x, &p).unwrap_or(f64::NAN)
                        })
                        .sum();
                    worst = worst.max(s.abs());
                }
            }
            report.check(
                "orthogonality_residual",
                worst,
                args.tol.unwrap_or(TOL_ORTHOGONALITY),
            );
            if w.iter().any(|&x| x <= 0.0) {
                report.convention("weights", "not all positive on this parameter set");
            }
            let _ = h;
        }
        Err(e) => report.convention("orthogonality", &format!("skipped: {e}")),
    }

    let mut csv_payload: Option<(&PathBuf, String)> = None;
    match spec_from_grid_parameters(&p) {
        Ok(spec) => {
            let m = build_representation(&spec).map_err(|e| e.to_string())?;
            match overlap_vs_racah(&spec, &m).map_err(|e| e.to_string())? {
                OverlapOutcome::Compared(cmp) => {
                    report.check(
                        "overlap_vs_polynomial",
                        cmp.max_deviation,
                        args.tol.unwrap_or(TOL_OVERLAP),
                    );
                    if let Some(path) = &args.csv {
                        let data = overlaps(&m).map_err(|e| e.to_string())?;
                        let mut out = String::from("n,s,overlap,normalized,racah\r\n");
                        for row in 0..=spec.n_max() {
                            for col in 0..=spec.n_max() {
                                let s = cmp.s_of_column[col];
                                let r =
                                    racah_eval(row, s, &cmp.params).map_err(|e| e.to_string())?;
                                out.push_str(&format!(
                                    "{},{},{},{},{}\r\n",
                                    row,
                                    s,
                                    data.w[(row, col)],
                                    data.p[(row, col)],
                                    r
                                ));
                            }
                        }
                        csv_payload = Some((path, out));
                    }
                }
                OverlapOutcome::SkippedClustered { min_gap } => {
                    report.convention(
                        "overlap_vs_polynomial",
                        &format!("skipped: clustered K2 spectrum (min gap {min_gap:e})"),
                    );
                }
            }
        }
        Err(e) => {
            report.convention(
                "overlap_vs_polynomial",
                &format!("skipped: no unitary representation for these parameters ({e})"),
            );
        }
    }
    if csv_payload.is_none() {
        if let Some(path) = &args.csv {
            csv_payload = Some((path, String::from("n,s,overlap,normalized,racah\r\n")));
        }
    }
    write_outputs(&mut report, start, &args.json, csv_payload)?;
    Ok(report)
}

fn cmd_couple(args: CoupleArgs, start: Instant) -> Result<Report, String> {
    let nu = [args.nu1, args.nu2, args.nu3];
    let block = WeightBlock::new(nu, args.quanta).map_err(|e| e.to_string())?;
    if let Some(j) = args.block {
        if j > args.quanta {
            return Err(format!("--block {j} outside 0..={}", args.quanta));
        }
    }
    let mut report = Report::new("couple");
    report.param_f64("nu1", args.nu1);
    report.param_f64("nu2", args.nu2);
    report.param_f64("nu3", args.nu3);
    report.param_usize("quanta", args.quanta);
    if let Some(j) = args.block {
        report.param_usize("block", j);
    }
    report.convention("triple_symmetrizer", TRIPLE_SYMMETRIZER_CONVENTION);

    let nu_sum: f64 = nu.iter().sum();
    let spectrum: Vec<String> = (0..=args.quanta)
        .map(|j| {
            let nu4 = nu_sum + j as f64;
            format!("{:.12}x{}", nu4 * (nu4 - 1.0), j + 1)
        })
        .collect();
    report.convention("c4_spectrum", &spectrum.join(", "));

    let spec_dev = full_casimir_spectrum_check(&block).map_err(|e| e.to_string())?;
    report.check(
        "c4_spectrum_pattern",
        spec_dev,
        args.tol.unwrap_or(TOL_SPECTRUM),
    );

    let blocks: Vec<usize> = match args.block {
        Some(j) => vec![j],
        None => (0..=args.quanta).collect(),
    };
    for j in blocks {
        let cb = couple(&block, j).map_err(|e| e.to_string())?;
        let rel = verify_racah_relations(&cb).map_err(|e| e.to_string())?;
        report.check(
            &format!("racah_relations_block_{j}"),
            rel.max(),
            args.tol.unwrap_or(TOL_CLOSURE),
        );
    }

    let ops = si_model_operators(&block).map_err(|e| e.to_string())?;
    report.check(
        "h_consistency",
        ops.h_consistency,
        args.tol.unwrap_or(TOL_H_CONSISTENCY),
    );
    let kmp = verify_kmp_relations(&ops).map_err(|e| e.to_string())?;
    report.check("kmp_l1", kmp.l_relations[0], args.tol.unwrap_or(TOL_KMP));
    report.check("kmp_l2", kmp.l_relations[1], args.tol.unwrap_or(TOL_KMP));
    report.check("kmp_l3", kmp.l_relations[2], args.tol.unwrap_or(TOL_KMP));
    report.check("kmp_r_squared", kmp.r_squared, args.tol.unwrap_or(TOL_KMP));
    if args.quanta >= 1 {
        let s_res = s_operator_window_residual(nu, args.quanta).map_err(|e| e.to_string())?;
        report.check("s_window_interior", s_res, args.tol.unwrap_or(TOL_CLOSURE));
    }

    write_outputs(&mut report, start, &args.json, None)?;
    Ok(report)
}

fn cmd_oscillator(args: OscillatorArgs, start: Instant) -> Result<Report, String> {
    let spec = OscillatorSpec::new(args.k1, args.k2, args.level).map_err(|e| e.to_string())?;
    let mut report = Report::new("oscillator");
    report.param_f64("k1", args.k1);
    report.param_f64("k2", args.k2);
    report.param_usize("level", args.level);
    let tol = args.tol.unwrap_or(TOL_OSCILLATOR);

    let r = verify_oscillator_algebra(&spec).map_err(|e| e.to_string())?;
    report.check("ladder_plus", r.ladder_plus, tol);
    report.check("ladder_minus", r.ladder_minus, tol);
    report.check("cubic_relation", r.cubic, tol);
    if r.alpha2_identically_zero {
        report.convention("alpha2", "identically zero");
    }
    let h = hahn_operators(&spec).map_err(|e| e.to_string())?;
    report.check("hahn_k3_identity", h.k3_identity, tol);
    report.check("hahn_relation_2", h.rel2, tol);
    report.check("hahn_relation_3", h.rel3, tol);

    write_outputs(&mut report, start, &args.json, None)?;
    Ok(report)
}
