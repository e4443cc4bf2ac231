//! Config-driven runs, as done by the `lapfem` binary: parse a TOML config, run a command,
//! and read back a field dump.

use lapfem::experiment::{read_field, run, Command, ExperimentConfig, RunOptions};

fn main() -> lapfem::Result<()> {
    let cfg = ExperimentConfig::from_toml(
        r#"
        nu = 5e-3
        [grid]
        nx_half = 32
        ny = 16
        [rhs]
        preset = "smooth"
        [sweep]
        nu_list = [4e-2, 2e-2, 1e-2]
        "#,
        None,
    )?;
    let out = std::env::temp_dir().join("lapfem-run-config");
    let opts = RunOptions { out: Some(out.clone()), nu: None };
    for cmd in [Command::Solve, Command::Sweep, Command::Limit] {
        let o = run(cmd, &cfg, &opts)?;
        println!("{}: {} files", cmd.name(), o.files.len());
    }
    print!("{}", std::fs::read_to_string(out.join("sweep.csv"))?);
    let (meta, u) = read_field(&out.join("u_plus.json"))?;
    println!("u_plus: {}x{} ({}), max |u| = {:.4}", meta.nx, meta.ny, meta.ordering, u.max_abs());
    Ok(())
}
