use chordstat::analysis::{
    asymptotic_cdf, asymptotic_density, cached_distribution, convergence_table, ibp_moment_identity_check,
    moment_report, normal_approx_density, normal_approx_tail_mass, uniform_grid, DensityValue,
};
use chordstat::exact::{count_row, count_stat, k_recursion_table};
use chordstat::oracle::{enumerate_counts, monte_carlo_streams, EnumerationOptions, RNG_ALGORITHM};
use chordstat::series::{crossing_base_column, GeneratingFunction};
use chordstat::{Error, StatKind};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::output::{Cell, OutputRecord};

/// A finished command: its table plus any cross-route disagreements found.
pub struct Outcome {
    pub record: OutputRecord,
    pub disagreements: Vec<String>,
}

impl From<OutputRecord> for Outcome {
    fn from(record: OutputRecord) -> Self {
        Outcome {
            record,
            disagreements: Vec::new(),
        }
    }
}

pub type CmdResult = Result<Outcome, Error>;

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<(), Error> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidArgument(msg()))
    }
}

fn positive(name: &str, v: usize) -> Result<(), Error> {
    require(v >= 1, || format!("--{name} must be at least 1"))
}

fn p_columns(width: usize) -> Vec<String> {
    (0..width).map(|p| format!("p{p}")).collect()
}

fn density_cell(d: DensityValue) -> Cell {
    match d {
        DensityValue::Finite(v) => Cell::Decimal(v),
        DensityValue::Divergent => Cell::Decimal(f64::INFINITY),
    }
}

pub fn count(stat: StatKind, n: usize, p: Option<usize>) -> CmdResult {
    positive("n", n)?;
    let mut rec = match p {
        Some(p) => {
            let mut rec = OutputRecord::new("count", &["stat", "n", "p", "count"]);
            let c = count_stat(stat, n, p)?;
            rec.push(vec![Cell::text(stat), Cell::Int(n as u64), Cell::Int(p as u64), Cell::int(&c)]);
            rec.param("p", p);
            rec
        }
        None => {
            let row = count_row(stat, n)?;
            let mut rec = OutputRecord::with_columns("count", p_columns(n));
            rec.push(row.counts().iter().map(Cell::int).collect());
            rec
        }
    };
    rec.param("stat", stat.to_string()).param("n", n);
    Ok(rec.into())
}

pub fn table(stat: StatKind, n_max: usize) -> CmdResult {
    positive("n-max", n_max)?;
    let mut columns = vec!["n".to_string()];
    columns.extend(p_columns(n_max));
    let mut rec = OutputRecord::with_columns("table", columns);
    rec.param("stat", stat.to_string()).param("n_max", n_max);
    for n in 1..=n_max {
        let row = count_row(stat, n)?;
        let mut cells = vec![Cell::Int(n as u64)];
        cells.extend(row.counts().iter().map(Cell::int));
        cells.resize(n_max + 1, Cell::Empty);
        rec.push(cells);
    }
    Ok(rec.into())
}

pub fn dist(stat: StatKind, n: usize, normalize: bool) -> CmdResult {
    positive("n", n)?;
    let mut columns = vec!["p", "count", "probability", "probability_decimal"];
    if normalize {
        columns.extend(["x", "scaled", "scaled_decimal"]);
    }
    let mut rec = OutputRecord::new("dist", &columns);
    rec.param("stat", stat.to_string()).param("n", n).param("normalize", normalize);
    let counts = count_row(stat, n)?;
    let dist = cached_distribution(stat, n)?;
    let scale = num_rational::BigRational::from_integer((n - 1).into());
    for (p, (c, prob)) in counts.counts().iter().zip(&dist.probs).enumerate() {
        let mut row = vec![
            Cell::Int(p as u64),
            Cell::int(c),
            Cell::rational(prob),
            Cell::Decimal(prob.to_f64().unwrap_or(f64::NAN)),
        ];
        if normalize {
            let scaled = &scale * prob;
            let x = if n > 1 { p as f64 / (n - 1) as f64 } else { 0.0 };
            row.extend([
                Cell::Decimal(x),
                Cell::rational(&scaled),
                Cell::Decimal(scaled.to_f64().unwrap_or(f64::NAN)),
            ]);
        }
        rec.push(row);
    }
    Ok(rec.into())
}

pub fn moments(stat: StatKind, n: usize, m: usize) -> CmdResult {
    positive("n", n)?;
    let r = moment_report(stat, n, m)?;
    let mut rec = OutputRecord::new(
        "moments",
        &[
            "stat",
            "n",
            "m",
            "factorial_moment",
            "factorial_moment_decimal",
            "mean",
            "mean_decimal",
            "variance",
            "variance_decimal",
        ],
    );
    rec.param("stat", stat.to_string()).param("n", n).param("m", m);
    let dec = |v: &num_rational::BigRational| Cell::Decimal(v.to_f64().unwrap_or(f64::NAN));
    rec.push(vec![
        Cell::text(stat),
        Cell::Int(n as u64),
        Cell::Int(m as u64),
        Cell::rational(&r.factorial_moment),
        dec(&r.factorial_moment),
        Cell::rational(&r.mean),
        dec(&r.mean),
        Cell::rational(&r.variance),
        dec(&r.variance),
    ]);
    Ok(rec.into())
}

pub fn asym(stat: StatKind, points: usize, cdf: bool) -> CmdResult {
    require(points >= 2, || "--points must be at least 2".into())?;
    let mut columns = vec!["x", "density"];
    if cdf {
        columns.push("cdf");
    }
    let mut rec = OutputRecord::new("asym", &columns);
    rec.param("stat", stat.to_string()).param("points", points).param("cdf", cdf);
    for x in uniform_grid(0.0, 1.0, points) {
        let mut row = vec![Cell::Decimal(x), density_cell(asymptotic_density(stat, x)?)];
        if cdf {
            row.push(Cell::Decimal(asymptotic_cdf(stat, x)?));
        }
        rec.push(row);
    }
    Ok(rec.into())
}

pub fn normal(stat: StatKind, n: usize, points: Option<usize>, tolerance: f64) -> CmdResult {
    require(n >= 2, || "--n must be at least 2".into())?;
    let grid = match points {
        Some(k) => {
            require(k >= 2, || "--points must be at least 2".into())?;
            uniform_grid(0.0, 1.0, k)
        }
        None => (0..n).map(|p| p as f64 / (n - 1) as f64).collect(),
    };
    let dist = cached_distribution(stat, n)?;
    let mut rec = OutputRecord::new("normal", &["x", "p", "normal_approx", "exact_scaled"]);
    rec.param("stat", stat.to_string()).param("n", n);
    if let Some(k) = points {
        rec.param("points", k);
    }
    rec.tolerance("quadrature_abs", tolerance);
    for x in grid {
        let value = match normal_approx_density(stat, n, x, tolerance) {
            Ok(v) => v,
            Err(Error::Divergent { .. }) => f64::INFINITY,
            Err(e) => return Err(e),
        };
        let p = ((n - 1) as f64 * x).round() as usize;
        let exact = (n - 1) as f64 * dist.probs[p].to_f64().unwrap_or(f64::NAN);
        rec.push(vec![Cell::Decimal(x), Cell::Int(p as u64), Cell::Decimal(value), Cell::Decimal(exact)]);
    }
    rec.summary
        .push(("tail_mass_below_zero".into(), json!(normal_approx_tail_mass(stat, n, tolerance)?)));
    Ok(rec.into())
}

pub fn gf(stat: StatKind, order: usize) -> CmdResult {
    positive("order", order)?;
    let gf = GeneratingFunction::new(stat, order)?;
    let mut rec = OutputRecord::new("gf", &["n", "p", "coefficient"]);
    rec.param("stat", stat.to_string()).param("order", order);
    let mut disagreements = Vec::new();
    for n in 1..=order {
        let exact = count_row(stat, n)?;
        for p in 0..n {
            let c = gf.coefficient(n, p)?;
            if &c != exact.counts().get(p).expect("row has n entries") {
                disagreements.push(format!("{stat}_{{{n},{p}}}: series {c}, closed form {}", exact.counts()[p]));
            }
            rec.push(vec![Cell::Int(n as u64), Cell::Int(p as u64), Cell::int(&c)]);
        }
    }
    Ok(Outcome {
        record: rec,
        disagreements,
    })
}

pub fn oracle(n: usize, threads: usize, allow_n9: bool) -> CmdResult {
    positive("n", n)?;
    positive("threads", threads)?;
    let tables = enumerate_counts(
        n,
        EnumerationOptions {
            threads,
            allow_extended: allow_n9,
        },
    )?;
    let mut rec = OutputRecord::new(
        "oracle",
        &["stat", "n", "p", "oracle_count", "exact_count", "series_count", "agree"],
    );
    rec.param("n", n).param("threads", threads).param("allow_n9", allow_n9);
    let mut disagreements = Vec::new();
    for stat in StatKind::ALL {
        let brute = tables.table(stat);
        let exact = count_row(stat, n)?;
        let series = GeneratingFunction::new(stat, n)?.row(n)?;
        for p in 0..n {
            let (b, e, s) = (&brute.counts()[p], &exact.counts()[p], &series.counts()[p]);
            let agree = b == e && e == s;
            if !agree {
                disagreements.push(format!("{stat}_{{{n},{p}}}: oracle {b}, closed form {e}, series {s}"));
            }
            rec.push(vec![
                Cell::text(stat),
                Cell::Int(n as u64),
                Cell::Int(p as u64),
                Cell::int(b),
                Cell::int(e),
                Cell::int(s),
                Cell::Flag(agree),
            ]);
        }
    }
    if tables.partition_violations != 0 {
        disagreements.push(format!("{} diagrams broke k + c + g + x = n - 1", tables.partition_violations));
    }
    rec.summary.extend([
        ("visited".to_string(), json!(tables.visited)),
        ("partition_violations".to_string(), json!(tables.partition_violations)),
        ("agreement".to_string(), json!(disagreements.is_empty())),
    ]);
    Ok(Outcome {
        record: rec,
        disagreements,
    })
}

pub fn sample(n: usize, reps: u64, seed: u64, streams: usize) -> CmdResult {
    positive("n", n)?;
    require(reps >= 1, || "--reps must be at least 1".into())?;
    positive("streams", streams)?;
    let report = monte_carlo_streams(n, reps, seed, streams)?;
    let mut rec = OutputRecord::new(
        "sample",
        &["stat", "p", "count", "frequency", "std_error", "exact_probability"],
    );
    rec.param("n", n).param("reps", reps).param("seed", seed).param("streams", streams);
    rec.metadata.rng_algorithm = Some(RNG_ALGORITHM.into());
    rec.metadata.seed = Some(seed);
    let mut summary = serde_json::Map::new();
    for stat in StatKind::ALL {
        let emp = report.distribution(stat);
        let exact: Vec<f64> = cached_distribution(stat, n)?
            .probs
            .iter()
            .map(|p| p.to_f64().unwrap_or(f64::NAN))
            .collect();
        for (p, &c) in emp.counts.iter().enumerate() {
            rec.push(vec![
                Cell::text(stat),
                Cell::Int(p as u64),
                Cell::Int(c),
                Cell::Decimal(emp.frequency(p)),
                Cell::Decimal(emp.std_error(p)),
                Cell::Decimal(exact[p]),
            ]);
        }
        let chi = emp.chi_square(&exact)?;
        summary.insert(
            stat.to_string(),
            json!({
                "mean": emp.mean(),
                "mean_std_error": emp.mean_std_error(),
                "exact_mean": exact.iter().enumerate().map(|(p, q)| p as f64 * q).sum::<f64>(),
                "chi_square": chi.statistic,
                "degrees_of_freedom": chi.degrees_of_freedom,
            }),
        );
    }
    rec.summary.push(("statistics".into(), Value::Object(summary)));
    Ok(rec.into())
}

pub fn figure2(n: usize, stat: Option<StatKind>, points: Option<usize>) -> CmdResult {
    require(n >= 2, || "--n must be at least 2".into())?;
    let grid = match points {
        Some(k) => {
            require(k >= 2, || "--points must be at least 2".into())?;
            uniform_grid(0.0, 1.0, k)
        }
        None => (0..n).map(|p| p as f64 / (n - 1) as f64).collect(),
    };
    let stats = stat.map_or(StatKind::ALL.to_vec(), |s| vec![s]);
    let mut rec = OutputRecord::new("figure2", &["stat", "x", "p", "exact_scaled", "asymptotic", "abs_error"]);
    rec.param("n", n);
    if let Some(s) = stat {
        rec.param("stat", s.to_string());
    }
    if let Some(k) = points {
        rec.param("points", k);
    }
    for s in stats {
        for row in convergence_table(s, n, &grid)? {
            rec.push(vec![
                Cell::text(s),
                Cell::Decimal(row.x),
                Cell::Int(row.p as u64),
                Cell::Decimal(row.exact_scaled),
                density_cell(row.asymptotic),
                row.abs_error.map_or(Cell::Empty, Cell::Decimal),
            ]);
        }
    }
    Ok(rec.into())
}

pub fn recursion(n_max: usize) -> CmdResult {
    positive("n-max", n_max)?;
    let base = crossing_base_column(n_max)?;
    let rows = k_recursion_table(n_max, &base)?;
    let mut columns = vec!["n".to_string()];
    columns.extend(p_columns(n_max));
    columns.push("agrees".into());
    let mut rec = OutputRecord::with_columns("recursion", columns);
    rec.param("n_max", n_max);
    let mut disagreements = Vec::new();
    for row in rows {
        let n = row.n();
        let agree = row == count_row(StatKind::Crossing, n)?;
        if !agree {
            disagreements.push(format!("recursion row n = {n} differs from the closed form"));
        }
        let mut cells = vec![Cell::Int(n as u64)];
        cells.extend(row.counts().iter().map(Cell::int));
        cells.resize(n_max + 1, Cell::Empty);
        cells.push(Cell::Flag(agree));
        rec.push(cells);
    }
    Ok(Outcome {
        record: rec,
        disagreements,
    })
}

pub fn ibp(m_max: usize, tolerance: f64) -> CmdResult {
    let mut rec = OutputRecord::new(
        "ibp",
        &[
            "m",
            "crossing_moment",
            "containing_moment",
            "containing_expected",
            "excluded_moment",
            "excluded_expected",
            "max_deviation",
        ],
    );
    rec.param("m_max", m_max);
    rec.tolerance("identity_abs", tolerance);
    for m in 0..=m_max {
        let r = ibp_moment_identity_check(m, tolerance)?;
        rec.push(vec![
            Cell::Int(m as u64),
            Cell::Decimal(r.crossing_moment),
            Cell::Decimal(r.containing_moment),
            Cell::Decimal(r.containing_expected),
            Cell::Decimal(r.excluded_moment),
            Cell::Decimal(r.excluded_expected),
            Cell::Decimal(r.max_deviation),
        ]);
    }
    Ok(rec.into())
}
