//! One function per subcommand. Each computes everything first, writes its
//! files in one go, then reads them back and derives the report checks from
//! what is on disk.

use std::path::{Path, PathBuf};
use std::time::Instant;

use eqkit_core::linalg::{generic_inverse, sym_eig};
use eqkit_core::{
    alpha_real_root_bound, certify_doubly, certify_equiangular, dea, fast_inverse, is_etf, sdst_factor, simplex_frame,
    sr_decompose, sr_decompose_cos, two_eigenvalue_factor, DenseMatrix, EquiangularMatrix, Error, FrameSet,
    MultiplicityHint,
};

use crate::error::CliError;
use crate::io::{self, read_matrix, write_all};
use crate::report::{Check, InputInfo, RunReport};

pub struct Ctx {
    pub tol: f64,
    pub out: String,
}

impl Ctx {
    fn path(&self, name: &str) -> PathBuf {
        PathBuf::from(format!("{}{name}", self.out))
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Angle {
    Degrees(f64),
    Cos(f64),
}

impl Angle {
    pub fn alpha(self) -> f64 {
        match self {
            Angle::Degrees(d) => d.to_radians().cos(),
            Angle::Cos(a) => a,
        }
    }

    fn record(self, report: &mut RunReport) {
        match self {
            Angle::Degrees(d) => report.param("theta_degrees", d),
            Angle::Cos(a) => report.param("alpha", a),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Fast,
    Generic,
}

fn load(path: &Path, report: &mut RunReport) -> Result<DenseMatrix, CliError> {
    let l = read_matrix(path)?;
    report.input = Some(InputInfo {
        path: path.display().to_string(),
        sha256: l.sha256,
        rows: l.matrix.rows(),
        cols: l.matrix.cols(),
    });
    Ok(l.matrix)
}

/// Writes the files, records them in the report and returns the time spent
/// computing up to this point.
fn emit(files: Vec<(PathBuf, String)>, report: &mut RunReport, start: Instant) -> Result<(), CliError> {
    report.wall_seconds.compute = start.elapsed().as_secs_f64();
    write_all(&files)?;
    report.outputs = files.into_iter().map(|(p, _)| p.display().to_string()).collect();
    Ok(())
}

fn read_back(report: &RunReport, i: usize) -> Result<DenseMatrix, CliError> {
    Ok(read_matrix(Path::new(&report.outputs[i]))?.matrix)
}

fn scale(a: &DenseMatrix) -> f64 {
    a.frobenius_norm().max(1.0)
}

/// Largest `|(S^T S)_ij - (G_alpha)_ij|`.
fn gram_defect(s: &DenseMatrix, alpha: f64) -> f64 {
    let g = s.gram();
    let mut worst = 0.0_f64;
    for i in 0..g.rows() {
        for j in 0..g.cols() {
            let want = if i == j { 1.0 } else { alpha };
            worst = worst.max((g[(i, j)] - want).abs());
        }
    }
    worst
}

fn below_diagonal(r: &DenseMatrix) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..r.rows() {
        for j in 0..i.min(r.cols()) {
            worst = worst.max(r[(i, j)].abs());
        }
    }
    worst
}

fn fmt_alpha(a: f64) -> String {
    format!("{:.6}", if a.abs() < 5e-7 { 0.0 } else { a })
}

pub fn sr(input: &Path, angle: Angle, ctx: &Ctx, report: &mut RunReport) -> Result<(), CliError> {
    angle.record(report);
    let a = load(input, report)?;
    let start = Instant::now();
    let alpha = angle.alpha();
    let dec = match angle {
        Angle::Degrees(d) => sr_decompose(&a, d.to_radians())?,
        Angle::Cos(c) => sr_decompose_cos(&a, c)?,
    };
    let files = vec![(ctx.path("S.csv"), io::to_csv(dec.s.matrix())), (ctx.path("R.csv"), io::to_csv(&dec.r))];
    emit(files, report, start)?;

    let s = read_back(report, 0)?;
    let r = read_back(report, 1)?;
    let n = s.cols() as f64;
    report.checks.push(Check::at_most("reconstruction ||A - SR||", a.distance(&s.matmul(&r)), ctx.tol * scale(&a)));
    report.checks.push(Check::at_most("gram max|S^T S - G_alpha|", gram_defect(&s, alpha), ctx.tol * n));
    report.checks.push(Check::at_most("R below diagonal", below_diagonal(&r), ctx.tol));
    report.value("alpha", alpha);
    report.summary = match certify_equiangular(&s, ctx.tol * n) {
        Some(c) => {
            report.value("certified_alpha", c);
            format!("equiangular: alpha={}", fmt_alpha(c))
        }
        None => "not equiangular".into(),
    };
    Ok(())
}

pub fn inverse(input: &Path, method: Method, ctx: &Ctx, report: &mut RunReport) -> Result<(), CliError> {
    report.param("method", if method == Method::Fast { "fast" } else { "generic" });
    let a = load(input, report)?;
    let n = a.cols() as f64;
    let start = Instant::now();
    let s = EquiangularMatrix::certify(a, ctx.tol * n)?;
    let x = match method {
        Method::Fast => fast_inverse(&s)?,
        Method::Generic => generic_inverse(s.matrix())?,
    };
    emit(vec![(ctx.path("inverse.csv"), io::to_csv(&x))], report, start)?;

    let x = read_back(report, 0)?;
    let s = s.matrix();
    report.checks.push(Check::at_most("||X S - I||", x.matmul(s).distance_to_identity(), ctx.tol * n));
    let alpha = certify_equiangular(s, ctx.tol * n).unwrap_or(f64::NAN);
    report.value("alpha", alpha);
    if alpha.abs() <= ctx.tol * n {
        report.checks.push(Check::at_most("||X - S^T|| (orthogonal input)", x.distance(&s.transpose()), ctx.tol * n));
        report.summary = "orthogonal: inverse is the transpose".into();
    } else {
        report.summary = format!("equiangular: alpha={}", fmt_alpha(alpha));
    }
    Ok(())
}

pub fn inverse_bench(sizes: &[usize], seed: u64, ctx: &Ctx, report: &mut RunReport) -> Result<(), CliError> {
    report.param("sizes", sizes.to_vec());
    report.param("seed", seed);
    report.param("repetitions", eqkit_bench::REPS);
    report.param("alpha", eqkit_bench::SWEEP_ALPHA);
    if sizes.len() < 2 || sizes.contains(&0) {
        return Err(CliError::Usage("--sizes needs at least two positive sizes".into()));
    }
    let start = Instant::now();
    let rows = eqkit_bench::sweep(sizes, seed, eqkit_bench::REPS)?;
    emit(vec![(ctx.path("bench.csv"), eqkit_bench::to_csv(&rows))], report, start)?;

    let text =
        std::fs::read_to_string(&report.outputs[0]).map_err(|e| CliError::io(Path::new(&report.outputs[0]), e))?;
    let rows = parse_bench_csv(&text).map_err(|m| CliError::parse(Path::new(&report.outputs[0]), m))?;
    let ops = eqkit_bench::op_exponents(&rows).ok_or_else(|| CliError::Usage("sizes must be distinct".into()))?;
    report.checks.push(Check::at_most("fast op-count exponent", ops.fast, 2.2));
    report.checks.push(Check::at_least("generic op-count exponent", ops.generic, 2.7));
    if let Some(t) = eqkit_bench::time_exponents(&rows) {
        report.value("time_exponent_fast", t.fast);
        report.value("time_exponent_generic", t.generic);
    }
    report.value("op_exponent_fast", ops.fast);
    report.value("op_exponent_generic", ops.generic);
    report.summary = format!("cost exponents: fast={:.3} generic={:.3}", ops.fast, ops.generic);
    Ok(())
}

fn parse_bench_csv(text: &str) -> Result<Vec<eqkit_bench::SweepRow>, String> {
    text.lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            if f.len() != 5 {
                return Err(format!("bad row {l:?}"));
            }
            let bad = || format!("bad row {l:?}");
            Ok(eqkit_bench::SweepRow {
                n: f[0].parse().map_err(|_| bad())?,
                t_fast: f[1].parse().map_err(|_| bad())?,
                t_generic: f[2].parse().map_err(|_| bad())?,
                ops_fast: f[3].parse().map_err(|_| bad())?,
                ops_generic: f[4].parse().map_err(|_| bad())?,
            })
        })
        .collect()
}

pub fn sdst_bound(input: &Path, ctx: &Ctx, report: &mut RunReport) -> Result<(), CliError> {
    report.param("find_alpha_bound", true);
    let a = load(input, report)?;
    let start = Instant::now();
    let (_, lambdas) = sym_eig(&a)?;
    let bound = alpha_real_root_bound(&lambdas);
    emit(Vec::new(), report, start)?;
    report.checks.push(Check::at_most("asymmetry", a.asymmetry(), ctx.tol * scale(&a)));
    report.value("eigenvalues", lambdas);
    report.value("alpha_bound", bound);
    report.summary = format!("alpha bound: {bound:.4}");
    Ok(())
}

pub fn sdst(input: &Path, angle: Angle, ctx: &Ctx, report: &mut RunReport) -> Result<(), CliError> {
    angle.record(report);
    let a = load(input, report)?;
    let start = Instant::now();
    let (route, s, d, alpha) = match sdst_factor(&a, angle.alpha()) {
        Ok(f) => {
            let alpha = f.s.alpha();
            ("sdst", f.s.into_matrix(), f.d, alpha)
        }
        Err(Error::MultiplicityUnsupported { hint: MultiplicityHint::TwoEigenvalue }) => {
            let (r, s) = two_eigenvalue_factor(&a)?;
            report.value("r", r);
            let alpha = s.alpha();
            ("two-eigenvalue", s.into_matrix(), vec![r; a.rows()], alpha)
        }
        Err(e) => return Err(e.into()),
    };
    let files = vec![(ctx.path("S.csv"), io::to_csv(&s)), (ctx.path("D.csv"), io::to_csv(&DenseMatrix::from_diag(&d)))];
    emit(files, report, start)?;

    let s = read_back(report, 0)?;
    let dm = read_back(report, 1)?;
    let n = s.cols() as f64;
    let rebuilt = s.matmul(&dm).matmul(&s.transpose());
    report.checks.push(Check::at_most("reconstruction ||A - S D S^T||", a.distance(&rebuilt), ctx.tol * scale(&a) * n));
    report.checks.push(Check::at_most("gram max|S^T S - G_alpha|", gram_defect(&s, alpha), ctx.tol * n));
    report.checks.push(Check::at_most("|trace D - trace A|", (dm.trace() - a.trace()).abs(), ctx.tol * scale(&a) * n));
    report.value("route", route);
    report.value("alpha", alpha);
    report.value("d", dm.diagonal());
    report.summary = format!("{route}: alpha={}", fmt_alpha(alpha));
    Ok(())
}

pub fn dea_cmd(input: &Path, angle: Angle, ctx: &Ctx, report: &mut RunReport) -> Result<(), CliError> {
    angle.record(report);
    let a = load(input, report)?;
    let start = Instant::now();
    let alpha = angle.alpha();
    let d = dea(&a, alpha)?;
    emit(vec![(ctx.path("S.csv"), io::to_csv(d.matrix()))], report, start)?;

    let s = read_back(report, 0)?;
    let nn = s.rows();
    let n = nn as f64;
    let c = (1.0 + (n - 1.0) * alpha).sqrt();
    let line = s.row_sums().iter().chain(&s.col_sums()).fold(0.0_f64, |m, x| m.max((x - c).abs()));
    report.checks.push(Check::at_most("gram max|S^T S - G_alpha|", gram_defect(&s, alpha), ctx.tol * n));
    report.checks.push(Check::at_most("gram max|S S^T - G_alpha|", gram_defect(&s.transpose(), alpha), ctx.tol * n));
    report.checks.push(Check::at_most("line sums max|Se - ce|, |S^T e - ce|", line, ctx.tol * n));
    report.value("alpha", alpha);
    report.value("line_sum", c);
    report.summary = match certify_doubly(&s, ctx.tol * n) {
        Some(c) => format!("doubly-equiangular: alpha={}", fmt_alpha(c)),
        None => "not doubly equiangular".into(),
    };
    Ok(())
}

pub fn frame(n: usize, ctx: &Ctx, report: &mut RunReport) -> Result<(), CliError> {
    report.param("n", n);
    let start = Instant::now();
    let sf = simplex_frame(n)?;
    emit(vec![(ctx.path("frame.csv"), io::to_csv(sf.matrix()))], report, start)?;

    let f = read_back(report, 0)?;
    let nf = n as f64;
    let tol = ctx.tol * (nf + 1.0);
    let tight = f.matmul(&f.transpose()).distance(&DenseMatrix::identity(n).scale((nf + 1.0) / nf));
    let row_sums = f.row_sums().iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    report.checks.push(Check::at_most("gram max|F^T F - G_(-1/n)|", gram_defect(&f, -1.0 / nf), tol));
    report.checks.push(Check::at_most("||F F^T - ((n+1)/n) I||", tight, tol));
    report.checks.push(Check::at_most("max |row sum|", row_sums, tol));
    let etf = is_etf(&FrameSet::new(f), tol);
    report.value("alpha", -1.0 / nf);
    report.value("etf", etf.is_etf());
    report.summary = format!("simplex frame: n={n}, {} vectors, alpha={}", n + 1, fmt_alpha(-1.0 / nf));
    Ok(())
}

pub fn check(input: &Path, ctx: &Ctx, report: &mut RunReport) -> Result<(), CliError> {
    let m = load(input, report)?;
    let start = Instant::now();
    emit(Vec::new(), report, start)?;
    let (rows, cols) = m.shape();
    let tol = ctx.tol * rows.max(cols) as f64;
    if let Some(a) = certify_doubly(&m, tol) {
        report.checks.push(Check::at_most("gram max|S^T S - G_alpha|", gram_defect(&m, a), tol));
        report.checks.push(Check::at_most("gram max|S S^T - G_alpha|", gram_defect(&m.transpose(), a), tol));
        report.value("alpha", a);
        report.value("class", "doubly-equiangular");
        report.summary = format!("doubly-equiangular: alpha={}", fmt_alpha(a));
        return Ok(());
    }
    if let Some(a) = certify_equiangular(&m, tol) {
        report.checks.push(Check::at_most("gram max|S^T S - G_alpha|", gram_defect(&m, a), tol));
        report.value("alpha", a);
        let etf = cols > rows && is_etf(&FrameSet::new(m), tol).is_etf();
        let class = if etf { "equiangular tight frame" } else { "equiangular" };
        report.value("class", class);
        report.summary = format!("{class}: alpha={}", fmt_alpha(a));
        return Ok(());
    }
    report.value("class", "none");
    report.summary = "not equiangular".into();
    Err(Error::NotEquiangular.into())
}
