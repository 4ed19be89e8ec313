use kwlab::config::{parse_config, parse_config_str};
use kwlab::lattice::{sample_family, GridSpec};
use kwlab::model::Family;
use kwlab::report::{convergence_study, nested_triple, run_suite, Command, Status};
use kwlab::residual::Check;
use kwlab::Error;

#[test]
fn residual_suite_on_m1_fills_ratio_columns() {
    let cfg = parse_config_str("model.m = 1\nresidual.checks = kw,second_order\n", &[]).unwrap();
    let out = run_suite(&cfg, Command::Residual);
    assert!(out.report.passed(), "{}", out.report.render(false));
    assert_eq!(out.report.records.len(), 6);
    let csv = &out.artifacts.iter().find(|a| a.name == "residual.csv").unwrap().contents;
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 18);
    assert!(rows[..6].iter().all(|r| r.ends_with(',')));
    assert!(rows[6..].iter().all(|r| !r.ends_with(',')));
}

#[test]
fn uniqueness_run_gives_one_sup_record() {
    let cfg = parse_config_str("model.m = 0\nwgrid.nt = 33\nwgrid.nrho = 33\n", &[]).unwrap();
    let out = run_suite(&cfg, Command::SolveW);
    let sup: Vec<_> = out.report.records.iter().filter(|r| r.name == "uniqueness.sup_u").collect();
    assert_eq!(sup.len(), 1);
    assert_eq!(sup[0].status, Status::Pass);
    assert!(sup[0].value < 1e-6);
}

#[test]
fn module_errors_become_failed_records() {
    let cfg = parse_config_str("solver.max_sweeps = 1\nwgrid.nt = 17\nwgrid.nrho = 17\nidentity.configs = 1\n", &[]).unwrap();
    let out = run_suite(&cfg, Command::Report);
    let failed: Vec<_> = out.report.records.iter().filter(|r| r.name.starts_with("solve-w: ")).collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0].status, Status::Fail);
    assert!(out.report.records.iter().any(|r| r.name.starts_with("asym.")));
}

#[test]
fn later_overrides_win_and_file_errors_surface() {
    let dir = std::env::temp_dir().join(format!("kwlab-pipeline-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("a.cfg");
    std::fs::write(&path, "grid.nt = 65\n").unwrap();
    let cfg = parse_config(Some(&path), &["grid.nt=129".into()]).unwrap();
    assert_eq!(cfg.get("grid.nt"), "129");
    assert!(matches!(parse_config(Some(&dir.join("missing.cfg")), &[]), Err(Error::Io(_))));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn studies_need_three_nested_grids() {
    let f = Family::Model { m: 0 };
    let g = GridSpec::default_box(9);
    let make = |s| sample_family(&f, s);
    assert!(matches!(convergence_study(&make, &[Check::Kw], &[g]), Err(Error::DegenerateStudy(1))));
    assert!(convergence_study(&make, &[Check::Kw], &[g, g, g]).is_err());
    assert!(convergence_study(&make, &[Check::Kw], &nested_triple(g)).is_ok());
}
