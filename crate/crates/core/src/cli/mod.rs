//! Command-line front end. Every subcommand produces a [`Table`] written as CSV
//! (default) or JSON.

mod config;
mod selftest;
mod table;

use std::ffi::OsString;
use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::warn;

pub use config::{parse_grid, parse_list, ConfigFile, CONFIG_KEYS};
pub use selftest::{run_selftest, SelfCheck};
pub use table::{format_num, Cell, Table};

use crate::dynamics::{sample_trajectory, InitialConditions};
use crate::error::{Error, Result};
use crate::nc::{derive_sw_params, nc_coefficients, NcParams};
use crate::numerics::{QuadratureSpec, SeriesControl};
use crate::qinfo::{closed_form_entropies, entropy_series, mutual_information};
use crate::thermo::{sweep, thermo_variables, ModelId, ThermoContext};
use crate::wigner::{momentum_marginal, reduce_wigner, Axis, Axis12, GaussianState, Grid2d, StargenState};

#[derive(Debug, Parser)]
#[command(name = "ncphase", version, about = "Phase-space noncommutative quantum mechanics: dynamics, Wigner states, purity and thermodynamics")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args, Default)]
pub struct GlobalArgs {
    /// Flat key=value file; flags override its values
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Position noncommutativity theta
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Momentum noncommutativity eta; sets gamma = eta/(2 m hbar) unless --gamma is given
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    #[arg(long, global = true)]
    pub hbar: Option<f64>,
    #[arg(long, global = true)]
    pub mass: Option<f64>,
    /// Momentum scale of the SW map
    #[arg(long, global = true)]
    pub mu: Option<f64>,
    /// NC frequency gamma (default 1, or derived from --eta)
    #[arg(long, global = true)]
    pub gamma: Option<f64>,
    /// Half-width of the position box
    #[arg(long, global = true)]
    pub a: Option<f64>,
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    /// Hard cap on series terms
    #[arg(long, global = true)]
    pub max_terms: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads
    #[arg(long, global = true, env = "NCPHASE_JOBS")]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form phase-space trajectory: t,Q1,Q2,Pi1,Pi2,Omega
    Trajectory(TrajectoryArgs),
    /// Reduced Wigner function of the Gaussian envelope on a (Q, Pi) grid
    WignerMap(WignerMapArgs),
    /// Normalized momentum distribution of a star-genstate
    Marginal(MarginalArgs),
    /// Linear entropies and mutual information against gamma t
    Entropy(EntropyArgs),
    /// Thermodynamic variables at one (sigma, lambda)
    Thermo(ThermoArgs),
    /// Thermodynamic sweep over sigma and lambda grids with NC - standard deltas
    Sweep(SweepArgs),
    /// Runs the built-in oracle checks
    Selftest,
}

#[derive(Debug, Args)]
pub struct TrajectoryArgs {
    /// Initial conditions x,y,pi_x,pi_y
    #[arg(long, default_value = "0.5,0.5,0.5,0.5", allow_hyphen_values = true)]
    pub ic: String,
    #[arg(long, default_value_t = 0.0)]
    pub t_min: f64,
    /// End time (default: half period pi/gamma)
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Number of intervals; steps + 1 rows are written
    #[arg(long, default_value_t = 64)]
    pub steps: usize,
}

#[derive(Debug, Args)]
pub struct WignerMapArgs {
    /// Kept sector: 1 for (Q1, Pi1), 2 for (Q2, Pi2)
    #[arg(long, default_value_t = 1)]
    pub axis: u8,
    /// Time
    #[arg(long, conflicts_with = "gamma_t")]
    pub t: Option<f64>,
    /// Time as a phase gamma t
    #[arg(long)]
    pub gamma_t: Option<f64>,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub pix: f64,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub piy: f64,
    /// Q grid
    #[arg(long, default_value = "-3:3:61lin", allow_hyphen_values = true)]
    pub q: String,
    /// Pi grid
    #[arg(long, default_value = "-4:4:81lin", allow_hyphen_values = true)]
    pub pi: String,
}

#[derive(Debug, Args)]
pub struct MarginalArgs {
    /// Quantum number
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub x: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub y: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub pix: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub piy: f64,
    /// Pi1 grid
    #[arg(long, default_value = "-6:6:121lin", allow_hyphen_values = true)]
    pub pi1: String,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    #[arg(long, default_value_t = 0.0)]
    pub t_min: f64,
    /// End time (default: one full cycle 2 pi/gamma)
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub pix: f64,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub piy: f64,
}

#[derive(Debug, Args)]
pub struct ThermoArgs {
    #[arg(long)]
    pub model: String,
    #[arg(long)]
    pub sigma: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Comma-separated model names
    #[arg(long, default_value = "rotor2d-nc,rotor2d-std")]
    pub models: String,
    #[arg(long, default_value = "0.1:20:60log")]
    pub sigma: String,
    #[arg(long, default_value = "0.01,0.1,1")]
    pub lambda: String,
}

/// Global settings after merging defaults, the config file and flags.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub nc: NcParams,
    pub mu: f64,
    pub gamma: f64,
    pub a: f64,
    pub quad: QuadratureSpec,
    pub series: SeriesControl,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub jobs: Option<usize>,
}

impl RunConfig {
    pub fn resolve(g: &GlobalArgs) -> Result<Self> {
        let file = match &g.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let pick = |flag: Option<f64>, key: &str, default: Option<f64>| -> Result<Option<f64>> {
            Ok(flag.or(file.get(key)?).or(default))
        };
        let theta = pick(g.theta, "theta", Some(0.0))?.unwrap_or(0.0);
        let eta = pick(g.eta, "eta", None)?;
        let hbar = pick(g.hbar, "hbar", Some(1.0))?.unwrap_or(1.0);
        let mass = pick(g.mass, "mass", Some(1.0))?.unwrap_or(1.0);
        let mu = pick(g.mu, "mu", Some(1.0))?.unwrap_or(1.0);
        let gamma_in = pick(g.gamma, "gamma", None)?;
        let a = pick(g.a, "a", Some(3.0))?.unwrap_or(3.0);

        let eta = match (eta, gamma_in) {
            (Some(e), _) => e,
            // eta = 2 m hbar gamma keeps the map consistent with the requested frequency.
            (None, Some(gm)) => 2.0 * mass * hbar * gm,
            (None, None) => 2.0 * mass * hbar,
        };
        let nc = NcParams::new(theta, eta, hbar, mass)?;
        derive_sw_params(&nc, mu)?;
        let gamma = match gamma_in {
            Some(gm) => {
                if g.eta.is_some() || file.get::<f64>("eta")?.is_some() {
                    let implied = nc.gamma();
                    if (implied - gm).abs() > 1e-12 * gm.abs().max(1.0) {
                        warn!("--gamma {gm} overrides gamma = {implied} implied by eta");
                    }
                }
                gm
            }
            None => nc.gamma(),
        };
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!("gamma must be >= 0, got {gamma}")));
        }
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::InvalidParameter(format!("box half-width a must be positive, got {a}")));
        }

        let dq = QuadratureSpec::default();
        let quad = QuadratureSpec::new(
            pick(g.abs_tol, "abs_tol", Some(dq.abs_tol))?.unwrap_or(dq.abs_tol),
            pick(g.rel_tol, "rel_tol", Some(dq.rel_tol))?.unwrap_or(dq.rel_tol),
            dq.max_panels,
        )?;
        let ds = SeriesControl::default();
        let max_terms = match g.max_terms {
            Some(v) => v,
            None => file.get("max_terms")?.unwrap_or(ds.max_terms),
        };
        let series = SeriesControl::new(ds.rel_tol, max_terms)?;
        let format = match g.format {
            Some(f) => f,
            None => match file.get::<String>("format")?.as_deref() {
                None | Some("csv") => Format::Csv,
                Some("json") => Format::Json,
                Some(other) => {
                    return Err(Error::InvalidParameter(format!("format must be csv or json, got '{other}'")))
                }
            },
        };
        let jobs = match g.jobs {
            Some(j) => Some(j),
            None => file.get("jobs")?,
        };
        if jobs == Some(0) {
            return Err(Error::InvalidParameter("jobs must be at least 1".into()));
        }
        Ok(RunConfig {
            nc,
            mu,
            gamma,
            a,
            quad,
            series,
            format,
            output: g.output.clone(),
            jobs,
        })
    }

    fn thermo_context(&self) -> ThermoContext {
        ThermoContext {
            series: self.series,
            box_half_width: self.a,
            mass: self.nc.mass,
            hbar: self.nc.hbar,
            gamma: self.gamma,
        }
    }

    fn need_gamma(&self, what: &str) -> Result<f64> {
        if self.gamma > 0.0 {
            Ok(self.gamma)
        } else {
            Err(Error::InvalidParameter(format!("{what} needs gamma > 0 or an explicit time range")))
        }
    }
}

/// Failure of a CLI run: library errors keep their class, I/O is reported as
/// a validation problem.
#[derive(Debug)]
enum RunError {
    Lib(Error),
    Io(String),
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Lib(e)
    }
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit code: 0 success, 2 invalid input, 3 numeric failure.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(RunError::Lib(e)) => {
            eprintln!("error: {e}");
            if e.is_numeric() {
                3
            } else {
                2
            }
        }
        Err(RunError::Io(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn execute(cli: &Cli) -> std::result::Result<i32, RunError> {
    let cfg = RunConfig::resolve(&cli.global)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cfg.jobs {
        builder = builder.num_threads(j);
    }
    let pool = builder
        .build()
        .map_err(|e| RunError::Io(format!("cannot start worker pool: {e}")))?;

    let (table, code) = pool.install(|| -> Result<(Table, i32)> {
        Ok(match &cli.command {
            Command::Trajectory(a) => (trajectory(&cfg, a)?, 0),
            Command::WignerMap(a) => (wigner_map(&cfg, a)?, 0),
            Command::Marginal(a) => (marginal(&cfg, a)?, 0),
            Command::Entropy(a) => (entropy(&cfg, a)?, 0),
            Command::Thermo(a) => (thermo(&cfg, a)?, 0),
            Command::Sweep(a) => (sweep_table(&cfg, a)?, 0),
            Command::Selftest => {
                let checks = run_selftest();
                let failed = checks.iter().any(|c| !c.passed);
                (selftest::table(&checks), if failed { 3 } else { 0 })
            }
        })
    })?;

    let text = match cfg.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    };
    match &cfg.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| RunError::Io(format!("cannot write {}: {e}", path.display())))?,
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                // A closed pipe (`| head`) is the reader's choice, not a failure.
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    return Err(RunError::Io(format!("cannot write output: {e}")));
                }
                _ => {}
            }
        }
    }
    Ok(code)
}

fn time_grid(t_min: f64, t_max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 || !(t_max > t_min) || !t_min.is_finite() || !t_max.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "need t_max > t_min and steps >= 1 (got {t_min}..{t_max}, {steps} steps)"
        )));
    }
    let h = (t_max - t_min) / steps as f64;
    Ok((0..=steps)
        .map(|i| if i == steps { t_max } else { t_min + h * i as f64 })
        .collect())
}

fn common_meta(t: &mut Table, cfg: &RunConfig) {
    t.meta("gamma", format_num(cfg.gamma))
        .meta("mass", format_num(cfg.nc.mass))
        .meta("hbar", format_num(cfg.nc.hbar));
}

fn trajectory(cfg: &RunConfig, a: &TrajectoryArgs) -> Result<Table> {
    let ic = parse_list(&a.ic)?;
    let [x, y, pix, piy] = ic[..] else {
        return Err(Error::InvalidParameter(format!("--ic needs four values, got {}", ic.len())));
    };
    let ic = InitialConditions::new(x, y, pix, piy);
    let t_max = match a.t_max {
        Some(t) => t,
        None => PI / cfg.need_gamma("trajectory")?,
    };
    let grid = time_grid(a.t_min, t_max, a.steps)?;
    let traj = sample_trajectory(&ic, cfg.gamma, cfg.nc.mass, &grid)?;

    let mut t = Table::new(&["t", "Q1", "Q2", "Pi1", "Pi2", "Omega"]);
    common_meta(&mut t, cfg);
    t.meta("ic", &a.ic);
    for (s, om) in traj.samples.iter().zip(&traj.omega) {
        let p = s.point;
        t.push(vec![s.t.into(), p.q1.into(), p.q2.into(), p.pi1.into(), p.pi2.into(), (*om).into()]);
    }
    Ok(t)
}

fn wigner_map(cfg: &RunConfig, a: &WignerMapArgs) -> Result<Table> {
    let axis = Axis12::from_index(a.axis)?;
    let time = match (a.t, a.gamma_t) {
        (Some(t), _) => t,
        (None, Some(gt)) => gt / cfg.need_gamma("--gamma-t")?,
        (None, None) => 0.0,
    };
    let qs = parse_grid(&a.q)?;
    let ps = parse_grid(&a.pi)?;
    let grid = Grid2d {
        q: Axis::from_nodes(qs)?,
        pi: Axis::from_nodes(ps)?,
    };
    let g = GaussianState::new(cfg.a, a.pix, a.piy)?;
    let rw = reduce_wigner(&g, axis, cfg.gamma, cfg.nc.mass, time, &grid, &cfg.quad)?;

    let mut t = Table::new(&["Q", "Pi", "value"]);
    t.meta("t", format_num(time)).meta("axis", axis.index());
    common_meta(&mut t, cfg);
    t.meta("a", format_num(cfg.a))
        .meta("pix", format_num(a.pix))
        .meta("piy", format_num(a.piy))
        .meta("rows", grid.q.len())
        .meta("cols", grid.pi.len());
    for (i, &q) in grid.q.nodes.iter().enumerate() {
        for (j, &p) in grid.pi.nodes.iter().enumerate() {
            t.push(vec![q.into(), p.into(), rw.value(i, j).into()]);
        }
    }
    Ok(t)
}

fn marginal(cfg: &RunConfig, a: &MarginalArgs) -> Result<Table> {
    let sw = derive_sw_params(&cfg.nc, cfg.mu)?;
    let mut coeff = nc_coefficients(&cfg.nc, &sw);
    if cfg.gamma != coeff.gamma {
        // An explicit --gamma wins: rebuild the coefficients at that frequency.
        coeff = crate::nc::Coefficients::from_frequency(cfg.gamma, cfg.nc.mass, cfg.mu);
    }
    let s = StargenState::new(a.n, coeff, cfg.nc.hbar, cfg.a)?;
    let ic = InitialConditions::new(a.x, a.y, a.pix, a.piy);
    let grid = parse_grid(&a.pi1)?;
    let m = momentum_marginal(&s, &ic, &grid, &cfg.quad)?;

    let mut t = Table::new(&["Pi1", "density"]);
    t.meta("n", a.n).meta("y", format_num(a.y)).meta("a", format_num(cfg.a));
    common_meta(&mut t, cfg);
    t.meta("norm", format_num(m.state.norm)).meta(
        "normalization",
        match m.normalization {
            crate::wigner::Normalization::Signed => "signed",
            crate::wigner::Normalization::Absolute => "absolute",
        },
    );
    for (p, d) in m.pi1.iter().zip(&m.density) {
        t.push(vec![(*p).into(), (*d).into()]);
    }
    Ok(t)
}

fn entropy(cfg: &RunConfig, a: &EntropyArgs) -> Result<Table> {
    let t_max = match a.t_max {
        Some(t) => t,
        None => 2.0 * PI / cfg.need_gamma("entropy")?,
    };
    let times = time_grid(a.t_min, t_max, a.steps)?;
    let g = GaussianState::new(cfg.a, a.pix, a.piy)?;
    let triples = entropy_series(&g, cfg.gamma, cfg.nc.mass, &times, &cfg.quad)?;

    let mut t = Table::new(&[
        "gamma_t", "S1", "S2", "S12", "I12", "S1_cf", "S2_cf", "S12_cf", "I12_cf",
    ]);
    common_meta(&mut t, cfg);
    t.meta("a", format_num(cfg.a));
    for e in &triples {
        let cf = closed_form_entropies(cfg.gamma, e.t);
        t.push(vec![
            (cfg.gamma * e.t).into(),
            e.s1.into(),
            e.s2.into(),
            e.s12.into(),
            e.i12().into(),
            cf.s1.into(),
            cf.s2.into(),
            cf.s12.into(),
            mutual_information(cfg.gamma, e.t).into(),
        ]);
    }
    Ok(t)
}

fn parse_models(s: &str) -> Result<Vec<ModelId>> {
    let models: Vec<ModelId> = s
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(str::parse)
        .collect::<Result<_>>()?;
    if models.is_empty() {
        return Err(Error::InvalidParameter("no models given".into()));
    }
    Ok(models)
}

fn thermo(cfg: &RunConfig, a: &ThermoArgs) -> Result<Table> {
    let model: ModelId = a.model.parse()?;
    let p = thermo_variables(model, a.sigma, a.lambda, &cfg.thermo_context())?;
    let mut t = Table::new(&["sigma", "lambda", "model", "Z", "lnZ", "U", "S", "Cv", "terms"]);
    t.push(vec![
        p.sigma.into(),
        p.lambda.into(),
        p.model.name().into(),
        p.z.into(),
        p.ln_z.into(),
        p.u.into(),
        p.s.into(),
        p.cv.into(),
        p.terms.into(),
    ]);
    Ok(t)
}

fn sweep_table(cfg: &RunConfig, a: &SweepArgs) -> Result<Table> {
    let models = parse_models(&a.models)?;
    let sigmas = parse_grid(&a.sigma)?;
    let lambdas = parse_grid(&a.lambda)?;
    if sigmas.iter().chain(&lambdas).any(|v| !(*v > 0.0)) {
        return Err(Error::InvalidParameter("sigma and lambda grids must be positive".into()));
    }
    let rows = sweep(&models, &sigmas, &lambdas, &cfg.thermo_context(), None)?;

    let mut t = Table::new(&["sigma", "lambda", "model", "Z", "U", "S", "Cv", "dU", "dS", "dCv", "err"]);
    for r in rows {
        let nan = f64::NAN;
        let (z, u, s, cv) = r.point.map_or((nan, nan, nan, nan), |p| (p.z, p.u, p.s, p.cv));
        let (du, ds, dcv) = r.delta.unwrap_or((nan, nan, nan));
        t.push(vec![
            r.sigma.into(),
            r.lambda.into(),
            r.model.name().into(),
            z.into(),
            u.into(),
            s.into(),
            cv.into(),
            du.into(),
            ds.into(),
            dcv.into(),
            r.error.unwrap_or_default().into(),
        ]);
    }
    Ok(t)
}
