//! Config-driven runs: the TOML schema, source presets, field dumps, sweep tables, the run
//! manifest, and the commands `solve`, `sweep`, `decompose`, `limit`, `oracle1d`,
//! `plasma-gen` and `verify`.
//!
//! ```toml
//! nu = 1e-2          # single nu for solve / decompose (0 selects the limit problem)
//! omega = 0.0        # mass term omega^2 u
//! branch = 1         # +1: limit from nu > 0, -1: from nu < 0
//!
//! [grid]
//! a = 1.0
//! ell = 1.0
//! nx_half = 32       # nodes per half line; nx = 2 nx_half + 1
//! ny = 64
//!
//! [coeff]
//! preset = "identity"    # or: file = "coeffs.json"
//!
//! [rhs]
//! preset = "unit"        # or: file = "f.json" (a field dump)
//!
//! [sweep]
//! nu_list = [1e-1, 5e-2, 2.5e-2, 1e-2, 5e-3, 2.5e-3]
//!
//! [limit]
//! tol_jump = 1e-8
//! ```

use crate::coefficients::{plasma, validate_coefficients, CoeffPreset, Coefficients, Mat2, Role, TensorField};
use crate::decomposition::{jump_residual, split, trace_of_regular, Decomposition};
use crate::interface::{self, InterfaceTrace};
use crate::limiting::{self, LimitOptions, SweepRecord};
use crate::oned;
use crate::{ComplexField, Error, Grid, Result, Side, C64};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

pub const SOLVER_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub a: f64,
    pub ell: f64,
    pub nx_half: usize,
    pub ny: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { a: 1.0, ell: 1.0, nx_half: 32, ny: 64 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffConfig {
    pub preset: Option<CoeffPreset>,
    pub file: Option<PathBuf>,
}

/// Source presets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RhsPreset {
    /// `f = 1`.
    Unit,
    Zero,
    /// `f = x` (no singularity).
    Odd,
    /// `f = cos(pi y / ell)`.
    Mode,
    /// `f = (1 + x) cos(pi y / ell) + i x^2 / 2`.
    Smooth,
    /// The source of the manufactured solution for `A = T = I` at the configured `nu`.
    Manufactured,
}

impl RhsPreset {
    /// `f(x, y)` for the closed-form presets; `None` for `manufactured`.
    pub fn eval(self, x: f64, y: f64, ell: f64) -> Option<C64> {
        Some(match self {
            RhsPreset::Unit => C64::new(1.0, 0.0),
            RhsPreset::Zero => C64::new(0.0, 0.0),
            RhsPreset::Odd => C64::new(x, 0.0),
            RhsPreset::Mode => C64::new((PI * y / ell).cos(), 0.0),
            RhsPreset::Smooth => C64::new((1.0 + x) * (PI * y / ell).cos(), 0.5 * x * x),
            RhsPreset::Manufactured => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RhsConfig {
    #[serde(default)]
    pub preset: Option<RhsPreset>,
    #[serde(default)]
    pub file: Option<PathBuf>,
}

impl Default for RhsConfig {
    fn default() -> Self {
        RhsConfig { preset: Some(RhsPreset::Unit), file: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub nu_list: Vec<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { nu_list: vec![1e-1, 5e-2, 2.5e-2, 1e-2, 5e-3, 2.5e-3] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LimitConfig {
    pub tol_jump: f64,
}

impl Default for LimitConfig {
    fn default() -> Self {
        LimitConfig { tol_jump: 1e-8 }
    }
}

/// Parameters of `plasma-gen` (`S(x) = slope * x`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlasmaConfig {
    pub omega: f64,
    pub omega_c: f64,
    pub slope: f64,
}

impl Default for PlasmaConfig {
    fn default() -> Self {
        PlasmaConfig { omega: 2.0, omega_c: 1.0, slope: 0.25 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub nu: Option<f64>,
    #[serde(default)]
    pub omega: f64,
    #[serde(default = "default_branch")]
    pub branch: i32,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub coeff: CoeffConfig,
    #[serde(default)]
    pub rhs: RhsConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub limit: LimitConfig,
    #[serde(default)]
    pub plasma: PlasmaConfig,
}

fn default_branch() -> i32 {
    1
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            nu: None,
            omega: 0.0,
            branch: 1,
            out: None,
            grid: GridConfig::default(),
            coeff: CoeffConfig::default(),
            rhs: RhsConfig::default(),
            sweep: SweepConfig::default(),
            limit: LimitConfig::default(),
            plasma: PlasmaConfig::default(),
        }
    }
}

impl ExperimentConfig {
    /// Parses TOML; relative file paths are resolved against `base`.
    pub fn from_toml(text: &str, base: Option<&Path>) -> Result<ExperimentConfig> {
        let mut cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if let Some(base) = base {
            for p in [&mut cfg.coeff.file, &mut cfg.rhs.file] {
                if let Some(f) = p.as_mut() {
                    if f.is_relative() {
                        *f = base.join(&*f);
                    }
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text, path.parent())
    }

    pub fn validate(&self) -> Result<()> {
        if self.branch != 1 && self.branch != -1 {
            return Err(Error::Config(format!("branch must be 1 or -1, got {}", self.branch)));
        }
        if !(self.omega >= 0.0 && self.omega.is_finite()) {
            return Err(Error::Config(format!("omega must be finite and >= 0, got {}", self.omega)));
        }
        if self.coeff.preset.is_some() && self.coeff.file.is_some() {
            return Err(Error::Config("coeff.preset and coeff.file are exclusive".into()));
        }
        if self.rhs.preset.is_some() == self.rhs.file.is_some() {
            return Err(Error::Config("exactly one of rhs.preset and rhs.file is required".into()));
        }
        for f in [&self.coeff.file, &self.rhs.file].into_iter().flatten() {
            if !f.exists() {
                return Err(Error::Config(format!("referenced file {} does not exist", f.display())));
            }
        }
        if !(self.limit.tol_jump > 0.0) {
            return Err(Error::Config("limit.tol_jump must be positive".into()));
        }
        limiting::check_nu_list(&self.sweep.nu_list).map_err(|e| Error::Config(format!("sweep.nu_list: {e}")))?;
        self.grid()?;
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid> {
        let g = &self.grid;
        Grid::new(g.a, g.ell, g.nx_half, g.ny).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn coefficients(&self, grid: &Grid) -> Result<Coefficients> {
        match (&self.coeff.preset, &self.coeff.file) {
            (_, Some(f)) => read_coefficients(f, grid),
            (Some(p), None) => Coefficients::preset(grid, p),
            (None, None) => Ok(Coefficients::identity(grid)),
        }
    }

    /// The source field; `nu` is only used by the manufactured preset.
    pub fn source(&self, grid: &Grid, nu: f64) -> Result<ComplexField> {
        if let Some(file) = &self.rhs.file {
            let (meta, f) = read_field(file)?;
            if meta.nx != grid.nx() || meta.ny != grid.ny {
                return Err(Error::Config(format!("rhs file is {}x{}, grid is {}x{}", meta.nx, meta.ny, grid.nx(), grid.ny)));
            }
            return Ok(f);
        }
        match self.rhs.preset.expect("validated") {
            RhsPreset::Manufactured => Ok(limiting::manufactured(grid, nu).1),
            p => Ok(ComplexField::from_fn(grid, |x, y| p.eval(x, y, grid.ell).expect("closed-form preset"))),
        }
    }
}

/// Metadata sidecar of a field dump.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldMeta {
    pub format: String,
    pub nx: usize,
    pub ny: usize,
    pub nx_half: usize,
    pub a: f64,
    pub ell: f64,
    /// `"row-major, y fastest"`: value `(i, j)` is pair number `i * ny + j`.
    pub ordering: String,
    pub endianness: String,
    pub dtype: String,
    /// Payload file name, relative to the sidecar.
    pub payload: String,
}

/// Writes `<name>.json` and `<name>.bin` into `dir`; returns the sidecar path.
pub fn write_field(dir: &Path, name: &str, grid: &Grid, u: &ComplexField) -> Result<PathBuf> {
    if !u.matches(grid) {
        return Err(Error::Argument("field does not match the grid".into()));
    }
    fs::create_dir_all(dir)?;
    let payload = format!("{name}.bin");
    let mut bytes = Vec::with_capacity(16 * u.data.len());
    for z in &u.data {
        bytes.extend_from_slice(&z.re.to_le_bytes());
        bytes.extend_from_slice(&z.im.to_le_bytes());
    }
    fs::write(dir.join(&payload), bytes)?;
    let meta = FieldMeta {
        format: "lapfem-field-1".into(),
        nx: grid.nx(),
        ny: grid.ny,
        nx_half: grid.nx_half,
        a: grid.a,
        ell: grid.ell,
        ordering: "row-major, y fastest".into(),
        endianness: "little".into(),
        dtype: "f64 pairs (re, im)".into(),
        payload,
    };
    let side = dir.join(format!("{name}.json"));
    fs::write(&side, serde_json::to_string_pretty(&meta).expect("plain data"))?;
    Ok(side)
}

pub fn read_field(sidecar: &Path) -> Result<(FieldMeta, ComplexField)> {
    let text = fs::read_to_string(sidecar)?;
    let meta: FieldMeta = serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", sidecar.display())))?;
    if meta.endianness != "little" {
        return Err(Error::Config(format!("unsupported endianness {:?}", meta.endianness)));
    }
    let path = sidecar.parent().unwrap_or(Path::new(".")).join(&meta.payload);
    let bytes = fs::read(&path)?;
    let n = meta.nx * meta.ny;
    if bytes.len() != 16 * n {
        return Err(Error::Config(format!("{} has {} bytes, expected {}", path.display(), bytes.len(), 16 * n)));
    }
    let f = |k: usize| f64::from_le_bytes(bytes[8 * k..8 * k + 8].try_into().expect("8 bytes"));
    let data = (0..n).map(|k| C64::new(f(2 * k), f(2 * k + 1))).collect();
    Ok((meta.clone(), ComplexField { nx: meta.nx, ny: meta.ny, data }))
}

/// Coefficient table: one `[m11, re m12, im m12, m22]` Hermitian entry per node, `x` lines
/// outermost, `ny` or `ny + 1` entries per line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientFile {
    pub nx: usize,
    pub rows: usize,
    pub a: Vec<[f64; 4]>,
    pub t: Vec<[f64; 4]>,
}

fn hermitian(e: &[f64; 4]) -> Mat2 {
    [[C64::new(e[0], 0.0), C64::new(e[1], e[2])], [C64::new(e[1], -e[2]), C64::new(e[3], 0.0)]]
}

fn entry(m: &Mat2) -> [f64; 4] {
    [m[0][0].re, m[0][1].re, m[0][1].im, m[1][1].re]
}

pub fn read_coefficients(path: &Path, grid: &Grid) -> Result<Coefficients> {
    let text = fs::read_to_string(path)?;
    let file: CoefficientFile = serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    if file.nx != grid.nx() || (file.rows != grid.ny && file.rows != grid.ny + 1) {
        return Err(Error::Config(format!("coefficient table is {}x{}, grid is {}x{}", file.nx, file.rows, grid.nx(), grid.ny)));
    }
    let a = TensorField::from_nodes(grid, Role::A, file.a.iter().map(hermitian).collect())?;
    let t = TensorField::from_nodes(grid, Role::T, file.t.iter().map(hermitian).collect())?;
    validate_coefficients(&a, &t)?;
    Ok(Coefficients { a, t })
}

pub fn coefficient_file(grid: &Grid, c: &Coefficients) -> CoefficientFile {
    CoefficientFile { nx: grid.nx(), rows: grid.ny, a: c.a.data.iter().map(entry).collect(), t: c.t.data.iter().map(entry).collect() }
}

#[derive(Serialize)]
struct TraceRow {
    y: f64,
    re: f64,
    im: f64,
}

pub fn write_trace(path: &Path, grid: &Grid, t: &InterfaceTrace) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    for (y, z) in grid.ys().into_iter().zip(&t.values) {
        w.serialize(TraceRow { y, re: z.re, im: z.im }).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e.to_string()))
}

/// The sweep table with header `nu,l2,xgrad,sqrtnu_grad,g_hm12,g_h12,jump_res,cauchy`.
pub fn sweep_csv(records: &[SweepRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Solve,
    Sweep,
    Decompose,
    Limit,
    Oracle1d,
    PlasmaGen,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Sweep => "sweep",
            Command::Decompose => "decompose",
            Command::Limit => "limit",
            Command::Oracle1d => "oracle1d",
            Command::PlasmaGen => "plasma-gen",
            Command::Verify => "verify",
        }
    }

    pub const ALL: [Command; 7] =
        [Command::Solve, Command::Sweep, Command::Decompose, Command::Limit, Command::Oracle1d, Command::PlasmaGen, Command::Verify];
}

impl std::str::FromStr for Command {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Command::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| Error::Config(format!("unknown command {s:?}")))
    }
}

/// Exit status for an error: 2 configuration, 3 solver, 4 verification.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Grid(_) | Error::Coefficient(_) | Error::Argument(_) | Error::Io(_) => 2,
        Error::Solver(_) | Error::Quadrature(_) => 3,
        Error::Verification(_) => 4,
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub out: Option<PathBuf>,
    pub nu: Option<f64>,
}

/// What a run produced: a JSON summary and the files written.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub summary: Value,
    pub files: Vec<PathBuf>,
}

/// Runs `cmd`, writes its artifacts and `manifest.json` into the output directory
/// (`--out`, else `out` from the config, else `./out`).
pub fn run(cmd: Command, cfg: &ExperimentConfig, opts: &RunOptions) -> Result<Outcome> {
    cfg.validate()?;
    let out = opts.out.clone().or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("out"));
    fs::create_dir_all(&out)?;
    let nu = opts.nu.or(cfg.nu);
    let mut files = Vec::new();
    let result = match cmd {
        Command::Solve => cmd_solve(cfg, nu, &out, &mut files),
        Command::Sweep => cmd_sweep(cfg, &out, &mut files),
        Command::Decompose => cmd_decompose(cfg, nu, &out, &mut files),
        Command::Limit => cmd_limit(cfg, &out, &mut files),
        Command::Oracle1d => cmd_oracle1d(cfg, nu, &out, &mut files),
        Command::PlasmaGen => cmd_plasma(cfg, &out, &mut files),
        Command::Verify => cmd_verify(cfg, &out, &mut files),
    };
    let (status, summary) = match &result {
        Ok(v) => ("ok".to_string(), v.clone()),
        Err(e) => (format!("error (exit {}): {e}", exit_code(e)), Value::Null),
    };
    let manifest = json!({
        "command": cmd.name(),
        "status": status,
        "config": cfg,
        "nu_override": opts.nu,
        "versions": {
            "lapfem": env!("CARGO_PKG_VERSION"),
            "num-complex": "0.4",
            "rustfft": "6",
        },
        "tolerances": {
            "linear_solver_relative_residual": SOLVER_TOL,
            "limit_jump": cfg.limit.tol_jump,
            "oracle_quadrature": oned::TOL,
            "parseval": 1e-10,
        },
        "outputs": files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        "summary": summary,
    });
    let mpath = out.join("manifest.json");
    fs::write(&mpath, serde_json::to_string_pretty(&manifest).expect("plain data"))?;
    let summary = result?;
    files.push(mpath);
    Ok(Outcome { summary, files })
}

fn write_json(path: PathBuf, v: &Value, files: &mut Vec<PathBuf>) -> Result<()> {
    fs::write(&path, serde_json::to_string_pretty(v).expect("plain data"))?;
    files.push(path);
    Ok(())
}

fn need_nu(nu: Option<f64>, cmd: &str) -> Result<f64> {
    nu.ok_or_else(|| Error::Config(format!("{cmd} needs nu (config key `nu` or --nu)")))
}

fn c(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

fn cmd_solve(cfg: &ExperimentConfig, nu: Option<f64>, out: &Path, files: &mut Vec<PathBuf>) -> Result<Value> {
    let nu = need_nu(nu, "solve")?;
    if nu == 0.0 {
        return Err(Error::Config("solve needs nu != 0 (use `limit` for the limit problem)".into()));
    }
    let grid = cfg.grid()?;
    let coeffs = cfg.coefficients(&grid)?;
    let f = cfg.source(&grid, nu)?;
    let s = limiting::solve_absorption(&f, nu, &coeffs, &grid, cfg.omega)?;
    files.push(write_field(out, "u", &grid, &s.u)?);
    let gp = out.join("g.csv");
    write_trace(&gp, &grid, &s.g)?;
    files.push(gp);
    let v = json!({
        "nu": nu,
        "l2": s.u.l2_norm(&grid),
        "max_abs": s.u.max_abs(),
        "f_l2": f.l2_norm(&grid),
        "g_mean": c(s.g.mean()),
        "g_h12": interface::sobolev_norm(&s.g, 0.5),
        "solver": s.report,
    });
    write_json(out.join("report.json"), &v, files)?;
    Ok(v)
}

fn cmd_sweep(cfg: &ExperimentConfig, out: &Path, files: &mut Vec<PathBuf>) -> Result<Value> {
    let grid = cfg.grid()?;
    let coeffs = cfg.coefficients(&grid)?;
    let nus: Vec<f64> = cfg.sweep.nu_list.iter().map(|n| n.abs() * cfg.branch as f64).collect();
    let f = cfg.source(&grid, *nus.last().expect("validated"))?;
    let sweep = limiting::lap_sweep(&f, &nus, &coeffs, &grid, cfg.omega)?;
    let path = out.join("sweep.csv");
    fs::write(&path, sweep_csv(&sweep.records)?)?;
    files.push(path);
    let last = sweep.limit();
    files.push(write_field(out, "u_limit", &grid, &last.solution.u)?);
    let jp = out.join("jump.csv");
    write_trace(&jp, &grid, &last.jump.jump)?;
    files.push(jp);
    let v = json!({
        "f_l2": sweep.f_norm,
        "records": sweep.records,
        "limit": {
            "nu": last.solution.nu,
            "g_mean": c(last.solution.g.mean()),
            "jump_mean": c(last.jump.jump.mean()),
            "jump_residual_relative": last.jump.relative,
        },
    });
    write_json(out.join("report.json"), &v, files)?;
    Ok(v)
}

fn limit_options(cfg: &ExperimentConfig) -> LimitOptions {
    LimitOptions { tol_jump: cfg.limit.tol_jump, branch: cfg.branch as f64 }
}

fn write_decomposition(out: &Path, grid: &Grid, dec: &Decomposition, a11: &[f64], files: &mut Vec<PathBuf>) -> Result<Value> {
    files.push(write_field(out, "u_h", grid, &dec.u_h)?);
    files.push(write_field(out, "u_reg", grid, &dec.u_reg)?);
    let p = trace_of_regular(grid, dec, Side::P)?;
    let n = trace_of_regular(grid, dec, Side::N)?;
    let jr = jump_residual(grid, dec, a11)?;
    let path = out.join("traces.csv");
    let mut w = csv::Writer::from_path(&path).map_err(csv_err)?;
    w.write_record(["y", "g_re", "g_im", "trace_p_re", "trace_p_im", "trace_n_re", "trace_n_im", "jump_re", "jump_im", "rho_re", "rho_im"])
        .map_err(csv_err)?;
    for (j, y) in grid.ys().into_iter().enumerate() {
        let row = [y, dec.g.values[j].re, dec.g.values[j].im, p.values[j].re, p.values[j].im, n.values[j].re, n.values[j].im,
            jr.jump.values[j].re, jr.jump.values[j].im, jr.residual.values[j].re, jr.residual.values[j].im];
        w.write_record(row.iter().map(|v| v.to_string())).map_err(csv_err)?;
    }
    w.flush()?;
    files.push(path);
    Ok(json!({
        "kind": dec.kind,
        "g_mean": c(dec.g.mean()),
        "jump_mean": c(jr.jump.mean()),
        "residual_l2": jr.residual_l2,
        "residual_h12": jr.residual_h12,
        "residual_relative": jr.relative,
    }))
}

fn cmd_decompose(cfg: &ExperimentConfig, nu: Option<f64>, out: &Path, files: &mut Vec<PathBuf>) -> Result<Value> {
    let nu = nu.unwrap_or(0.0);
    let grid = cfg.grid()?;
    let coeffs = cfg.coefficients(&grid)?;
    let a11 = coeffs.a.a11_on_interface(&grid);
    let f = cfg.source(&grid, nu)?;
    let v = if nu == 0.0 {
        let l = limiting::solve_limiting(&f, &coeffs, &grid, &limit_options(cfg))?;
        write_decomposition(out, &grid, &l.decomposition, &a11, files)?
    } else {
        let s = limiting::solve_absorption(&f, nu, &coeffs, &grid, cfg.omega)?;
        let dec = split(&grid, &s.u, &s.g, nu, &coeffs, nu.signum())?;
        let rec = dec.reconstruct(&grid);
        let mut err: f64 = 0.0;
        for i in (0..grid.nx()).filter(|&i| i != grid.i_sigma()) {
            for j in 0..grid.ny {
                err = err.max((rec.at(i, j) - s.u.at(i, j)).norm());
            }
        }
        let mut v = write_decomposition(out, &grid, &dec, &a11, files)?;
        v["reconstruction_error"] = json!(err);
        v
    };
    write_json(out.join("report.json"), &v, files)?;
    Ok(v)
}

fn cmd_limit(cfg: &ExperimentConfig, out: &Path, files: &mut Vec<PathBuf>) -> Result<Value> {
    let grid = cfg.grid()?;
    let coeffs = cfg.coefficients(&grid)?;
    let f = cfg.source(&grid, 0.0)?;
    let l = limiting::solve_limiting(&f, &coeffs, &grid, &limit_options(cfg))?;
    files.push(write_field(out, "u_plus", &grid, &l.u)?);
    let gp = out.join("g_plus.csv");
    write_trace(&gp, &grid, &l.g)?;
    files.push(gp);
    let green = limiting::green_check(&grid, &f, &l.decomposition, &f, &l.decomposition)?;
    let v = json!({
        "branch": cfg.branch,
        "g_l2": l.g.l2_norm(),
        "g_h12": interface::sobolev_norm(&l.g, 0.5),
        "g_mean": c(l.g.mean()),
        "jump_mean": c(l.jump.jump.mean()),
        "jump_residual_l2": l.jump.residual_l2,
        "jump_residual_relative": l.jump.relative,
        "u_l2": l.u.l2_norm(&grid),
        "green_self": green,
        "interface_size": l.interface_size,
    });
    write_json(out.join("report.json"), &v, files)?;
    Ok(v)
}

fn cmd_oracle1d(cfg: &ExperimentConfig, nu: Option<f64>, out: &Path, files: &mut Vec<PathBuf>) -> Result<Value> {
    let grid = cfg.grid()?;
    let preset = match cfg.rhs.preset {
        Some(p @ (RhsPreset::Unit | RhsPreset::Zero | RhsPreset::Odd)) => p,
        _ => return Err(Error::Config("oracle1d needs a y-independent real rhs preset (unit, zero, odd)".into())),
    };
    if !matches!(cfg.coeff.preset, None | Some(CoeffPreset::Identity)) || cfg.coeff.file.is_some() {
        return Err(Error::Config("oracle1d supports the identity coefficients only".into()));
    }
    let f = move |x: f64| preset.eval(x, 0.0, 1.0).expect("closed form").re;
    let one = |_: f64| 1.0;
    let xs = grid.xs();
    let nu = nu.unwrap_or(0.0);
    let (u, v) = if nu == 0.0 {
        let l = oned::limit_1d(&f, &one, grid.a, &xs, cfg.branch as f64)?;
        let v = json!({
            "nu": 0.0, "branch": cfg.branch, "kappa": c(l.kappa), "g": c(l.g), "c0": c(l.c0),
            "reg_trace_p": c(l.reg_trace_p), "reg_trace_n": c(l.reg_trace_n), "jump": c(l.jump),
        });
        (l.u, v)
    } else {
        let s = oned::solve_1d(&f, &one, nu, grid.a, &xs)?;
        let v = json!({ "nu": nu, "kappa": c(s.kappa), "d": c(s.d), "g": c(s.g), "c0": c(s.c0) });
        (s.u, v)
    };
    let path = out.join("oracle1d.csv");
    let mut w = csv::Writer::from_path(&path).map_err(csv_err)?;
    for (x, z) in xs.iter().zip(&u) {
        w.serialize((x, z.re, z.im)).map_err(csv_err)?;
    }
    w.flush()?;
    files.push(path);
    write_json(out.join("report.json"), &v, files)?;
    Ok(v)
}

fn cmd_plasma(cfg: &ExperimentConfig, out: &Path, files: &mut Vec<PathBuf>) -> Result<Value> {
    let grid = cfg.grid()?;
    let p = &cfg.plasma;
    let (lo, hi) = plasma::admissible_s_range(p.omega, p.omega_c)?;
    let coeffs = plasma::solver_coefficients(&grid, p.omega, p.omega_c, p.slope)?;
    let report = validate_coefficients(&coeffs.a, &coeffs.t)?;
    let path = out.join("coeffs.json");
    fs::write(&path, serde_json::to_string(&coefficient_file(&grid, &coeffs)).expect("plain data"))?;
    files.push(path);
    let s_probe = 0.5 * p.slope * grid.a;
    let (r1, r2) = (plasma::expansion_residual(p.omega, p.omega_c, s_probe, 1e-2)?, plasma::expansion_residual(p.omega, p.omega_c, s_probe, 5e-3)?);
    let v = json!({
        "omega": p.omega, "omega_c": p.omega_c, "slope": p.slope,
        "d_i": plasma::d_i(p.omega, p.omega_c),
        "s_range": [lo, hi],
        "coercivity": report,
        "expansion_probe_s": s_probe,
        "expansion_residual_ratio": r1 / r2,
    });
    write_json(out.join("report.json"), &v, files)?;
    Ok(v)
}

/// One line of the verification suite.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

fn check(name: &'static str, value: f64, tolerance: f64) -> Check {
    Check { name, value, tolerance, passed: value.is_finite() && value <= tolerance }
}

/// The property suite run by `verify` on the configured grid.
pub fn verification_suite(cfg: &ExperimentConfig) -> Result<Vec<Check>> {
    let grid = cfg.grid()?;
    let coeffs = Coefficients::identity(&grid);
    let unit = ComplexField::from_fn(&grid, |_, _| C64::new(1.0, 0.0));
    let mut out = Vec::new();

    // interface norms
    let t = InterfaceTrace::from_fn(&grid, |y| C64::new(1.0 + 0.5 * (PI * y / grid.ell).cos(), (2.0 * PI * y / grid.ell).sin()));
    let parseval = (t.coefficients().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() - t.l2_norm()).abs() / t.l2_norm();
    out.push(check("parseval", parseval, 1e-10));
    let delta = 0.5 * grid.a;
    let lift = interface::harmonic_lifting(&grid, &t, delta)?;
    let on_sigma = lift.line(grid.i_sigma()).iter().zip(&t.values).fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
    let beyond = (0..grid.nx()).filter(|&i| grid.x(i) >= delta || grid.x(i) < 0.0).fold(0.0f64, |m, i| {
        lift.line(i).iter().fold(m, |m, z| m.max(z.norm()))
    });
    out.push(check("lifting_boundary_data", on_sigma.max(beyond), 1e-12));
    let u = ComplexField::from_fn(&grid, |x, y| C64::new((1.0 - x * x) * (PI * y / grid.ell).sin(), x * (2.0 * PI * y / grid.ell).cos()));
    let j2 = interface::bessel_potential_pow(&grid, &u, 2);
    let dy = interface::spectral_dy(&grid, &u);
    let lhs = j2.l2_norm(&grid).powi(2);
    let rhs = u.l2_norm(&grid).powi(2) + dy.l2_norm(&grid).powi(2);
    out.push(check("bessel_potential_identity", (lhs - rhs).abs() / rhs, 1e-10));

    // absorbed solves
    let nu = 1e-2;
    let sp = limiting::solve_absorption(&unit, nu, &coeffs, &grid, 0.0)?;
    let sn = limiting::solve_absorption(&unit, -nu, &coeffs, &grid, 0.0)?;
    out.push(check("conjugation_symmetry", sn.u.sub(&sp.u.conj()).max_abs() / sp.u.max_abs(), 1e-10));
    let o = oned::solve_1d(&|_| 1.0, &|_| 1.0, nu, grid.a, &grid.xs())?;
    let oerr = (0..grid.nx()).fold(0.0f64, |m, i| m.max((sp.u.at(i, 0) - o.u[i]).norm()));
    out.push(check("oracle_agreement", oerr / sp.u.max_abs(), 1e-2));
    let dec = split(&grid, &sp.u, &sp.g, nu, &coeffs, 1.0)?;
    let rec = dec.reconstruct(&grid);
    let rerr = (0..grid.nx()).filter(|&i| i != grid.i_sigma()).fold(0.0f64, |m, i| {
        rec.line(i).iter().zip(sp.u.line(i)).fold(m, |m, (a, b)| m.max((a - b).norm()))
    });
    out.push(check("reconstruction", rerr, 1e-12));

    // limit problem
    let opts = LimitOptions { tol_jump: cfg.limit.tol_jump, branch: 1.0 };
    let l = limiting::solve_limiting(&unit, &coeffs, &grid, &opts)?;
    out.push(check("limit_jump_residual", l.jump.relative, cfg.limit.tol_jump));
    out.push(check("limit_g_anchor", (l.g.mean() - C64::new(0.0, -2.0 / PI)).norm() / (2.0 / PI), 0.03));
    let zero = limiting::solve_limiting(&ComplexField::zeros(&grid), &coeffs, &grid, &opts)?;
    out.push(check("limit_zero_source", zero.g.l2_norm().max(zero.u.max_abs()), 1e-10));
    let green = limiting::green_check(&grid, &unit, &l.decomposition, &unit, &l.decomposition)?;
    out.push(check("green_identity", green.residual, 1e-3));

    // plasma generator
    let di = plasma::d_i(2.0, 1.0);
    let (lo, hi) = plasma::admissible_s_range(2.0, 1.0)?;
    out.push(check("plasma_constants", (di - 0.5).abs().max((lo + 1.0).abs()).max((hi - 1.0 / 3.0).abs()), 1e-12));
    let ok = plasma::solver_coefficients(&grid, 2.0, 1.0, 0.25).is_ok();
    out.push(check("plasma_validates", if ok { 0.0 } else { 1.0 }, 0.0));
    Ok(out)
}

fn cmd_verify(cfg: &ExperimentConfig, out: &Path, files: &mut Vec<PathBuf>) -> Result<Value> {
    let checks = verification_suite(cfg)?;
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    let v = json!({ "checks": checks, "failed": failed });
    write_json(out.join("verify.json"), &v, files)?;
    if !failed.is_empty() {
        return Err(Error::Verification(format!("failed checks: {}", failed.join(", "))));
    }
    Ok(v)
}
