use gevrey_lab::lab::{series_table, to_json, Check, InitialData, Scenario, Table};
use gevrey_lab::diagnostics::norm_series_fields;
use gevrey_lab::spectral::{build_grid, RandomFieldSpec};
use std::path::{Path, PathBuf};

fn scenario_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

#[test]
fn shipped_scenarios_parse_and_round_trip() {
    let mut seen = 0;
    for entry in std::fs::read_dir(scenario_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_none_or(|e| e != "cfg") {
            continue;
        }
        let s = Scenario::parse_file(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let again = Scenario::parse_str(&s.to_config_string(), path.parent().unwrap()).unwrap();
        assert_eq!(s, again, "{}", path.display());
        seen += 1;
    }
    assert!(seen >= 4);
}

#[test]
fn oracle_scenario_uses_the_exact_solution() {
    let s = Scenario::parse_file(&scenario_dir().join("cole-hopf-oracle.cfg")).unwrap();
    assert!(matches!(s.initial, InitialData::ColeHopf { .. }));
    let s = Scenario::parse_file(&scenario_dir().join("taylor-green.cfg")).unwrap();
    assert!(s.diagnostics.checks.contains(&Check::Energy));
}

#[test]
fn config_errors_name_the_line() {
    let dup = "name = a\n[grid]\nn = 8\nn = 16\n";
    let e = Scenario::parse_str(dup, Path::new(".")).unwrap_err().to_string();
    assert!(e.contains('3') && e.contains('4'), "{e}");
    let odd = "name = a\n[grid]\nn = 9\n";
    assert_eq!(Scenario::parse_str(odd, Path::new(".")).unwrap_err().exit_code(), 2);
    let section = "name = a\n[grids]\nn = 8\n";
    assert!(Scenario::parse_str(section, Path::new(".")).unwrap_err().to_string().contains("grids"));
}

#[test]
fn series_csv_has_fixed_columns_and_full_precision() {
    let g = build_grid(8, 6.0, 2.0 / 3.0).unwrap();
    let fields: Vec<_> = (0..3)
        .map(|s| RandomFieldSpec::new(1.0, s).generate(&g).with_time(0.1 * s as f64))
        .collect();
    let series = norm_series_fields(&fields, &[0.0, 1.0], &[0.0, 0.2], true).unwrap();
    let t: Table = series_table(&series);
    assert_eq!(&t.header[..3], ["time", "J_0", "J_1"]);
    assert_eq!(t.rows.len(), 3);
    let csv = t.to_csv_string();
    assert!(!csv.contains('\r'));
    let row: Vec<&str> = csv.lines().nth(2).unwrap().split(',').collect();
    assert_eq!(row.len(), t.header.len());
    let back: f64 = row[1].parse().unwrap();
    assert_eq!(back, t.rows[1][1].unwrap());
}

#[test]
fn absent_values_become_empty_cells() {
    let mut t = Table::new(vec!["a".into(), "b".into()]);
    t.push(vec![Some(1.0), None]);
    assert_eq!(t.to_csv_string(), "a,b\n1.0000000000000000e0,\n");
}

#[test]
fn json_wraps_parameters_and_data() {
    let v: serde_json::Value = serde_json::from_str(&to_json(&[1, 2], &"x").unwrap()).unwrap();
    assert_eq!(v["parameters"][1], 2);
    assert_eq!(v["data"], "x");
}
