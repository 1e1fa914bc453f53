use std::path::Path;
use std::process::Command;

use stokes_dpg::dpg::postprocess_velocity;
use stokes_dpg::problems::{self, Load};
use stokes_dpg::{study, SolverMethod};
use stokes_dpg_cli::{run_convergence, run_flux};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stokes-dpg"))
}

fn convergence_into(dir: &Path) {
    let status = bin()
        .args(["convergence", "--problem", "plate", "--levels", "2", "--seed", "7"])
        .arg("--out")
        .arg(dir)
        .stdout(std::process::Stdio::null())
        .stderr(std::process::Stdio::null())
        .status()
        .unwrap();
    assert!(status.success());
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    convergence_into(a.path());
    convergence_into(b.path());
    for name in ["plate_convergence.csv", "plate_level2.vtk"] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert!(!x.is_empty());
        assert_eq!(x, y, "{name} differs");
    }
}

#[test]
fn vtk_cell_count_matches_mesh() {
    let dir = tempfile::tempdir().unwrap();
    convergence_into(dir.path());
    let text = std::fs::read_to_string(dir.path().join("plate_level2.vtk")).unwrap();
    assert!(text.starts_with("# vtk DataFile Version 3.0\n"));
    assert!(text.contains("\nCELL_DATA 64\n"));
    assert!(text.contains("\nCELL_TYPES 64\n"));
    let csv = std::fs::read_to_string(dir.path().join("plate_convergence.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert_eq!(csv.lines().nth(2).unwrap().split(',').nth(1), Some("64"));
}

#[test]
fn zero_data_gives_exactly_zero_eta() {
    for mut spec in [problems::smooth(), problems::plate_manufactured()] {
        spec.load = Load::Zero;
        spec.exact = None;
        let out = run_convergence(&spec, 2, SolverMethod::Direct).unwrap();
        for r in &out.records {
            assert_eq!(r.eta, 0.0);
        }
        for line in out.csv.lines().skip(1) {
            assert_eq!(line.split(',').nth(3), Some("0.000000000000e0"));
        }
    }
}

#[test]
fn zero_solution_has_zero_flux() {
    let mut spec = problems::channel();
    spec.boundary = None;
    spec.exact = None;
    let rows = run_flux(&spec, 1, SolverMethod::Direct, &[1.0, 3.0, 9.0]).unwrap();
    for r in rows {
        assert_eq!(r.flux, 0.0);
    }
}

#[test]
fn flux_through_inflow_and_outflow_sections() {
    let rows = run_flux(&problems::channel(), 2, SolverMethod::Direct, &[1.0, 3.0, 5.0, 7.0, 9.0]).unwrap();
    for r in rows {
        assert!(r.deviation.abs() < 0.02 * problems::CHANNEL_FLUX, "x = {}: {}", r.x, r.flux);
    }
    assert!(run_flux(&problems::channel(), 1, SolverMethod::Direct, &[10.5]).is_err());
}

#[test]
fn channel_velocity_peaks_in_the_inflow_section() {
    let spec = problems::channel();
    let run = study::run_level(&spec, 1, SolverMethod::Direct, None).unwrap();
    let vel = postprocess_velocity(&run.mesh, &run.solution).unwrap();
    let t = (0..vel.len())
        .max_by(|&a, &b| vel[a][0].hypot(vel[a][1]).total_cmp(&vel[b][0].hypot(vel[b][1])))
        .unwrap();
    let c = run.mesh.corners(t);
    assert!((c[0][0] + c[1][0] + c[2][0]) / 3.0 < 2.0);
}

#[test]
fn oracles_command_passes_with_default_seed() {
    let out = bin().arg("oracles").output().unwrap();
    assert_eq!(out.stdout, bin().args(["oracles", "--seed", "20240611"]).output().unwrap().stdout);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| l.starts_with("PASS")));
    assert!(text.contains("dimension formulas on unit_square(1)"));
}

#[test]
fn unknown_ids_are_rejected() {
    assert!(!bin().args(["convergence", "--problem", "stokes"]).output().unwrap().status.success());
    assert!(!bin().args(["convergence", "--solver", "lu"]).output().unwrap().status.success());
    assert!(!bin().args(["convergence", "--levels", "0"]).output().unwrap().status.success());
}
