//! End-to-end checks of the command-line interface: subcommands, file
//! outputs, deterministic JSON, and exit codes.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_charvar"))
}

#[test]
fn arcs_reports_strata_and_oracle() {
    let out = bin().args(["arcs", "3", "5", "--samples", "64"]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["piece"], "T(3,5)");
    assert_eq!(v["strata"].as_array().unwrap().len(), 5);
    let oracle = v["oracle"].as_array().unwrap();
    assert_eq!(oracle.len(), 4);
    for entry in oracle {
        assert!(entry["max_residual_to_line"].as_f64().unwrap() < 1e-9);
    }
    // The distinguished arc has endpoints π/15 and 11π/15.
    let found = v["strata"].as_array().unwrap().iter().any(|s| {
        s["kind"].get("IrreducibleArc").is_some_and(|k| k["a"] == 1 && k["b"] == 1)
            && s["boundary_image"]["t_lo"] == serde_json::json!({"num": 1, "den": 15})
            && s["boundary_image"]["t_hi"] == serde_json::json!({"num": 11, "den": 15})
    });
    assert!(found, "distinguished arc endpoints missing");
}

#[test]
fn arcs_composite_slopes() {
    let out = bin().args(["arcs", "--sum", "-2,7", "-2,7"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let slopes: Vec<i64> = v["strata"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["boundary_image"]["slope"]["num"].as_i64().unwrap())
        .collect();
    for want in [0, 14, 28] {
        assert!(slopes.contains(&want), "missing slope {want} in {slopes:?}");
    }
}

#[test]
fn splice_census_json_and_svg() {
    let dir = std::env::temp_dir().join("charvar-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let json = dir.join("census.json");
    let svg = dir.join("overlay.svg");
    let out = bin()
        .args([
            "splice",
            "3,5",
            "2,7",
            "--matrix",
            "1,0,-1,-1",
            "--json",
            json.to_str().unwrap(),
            "--svg",
            svg.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["counts"]["isolated_by_zariski"]["0"], 22);
    assert_eq!(v["counts"]["isolated_by_zariski"]["2"], 6);
    let svg_text = std::fs::read_to_string(&svg).unwrap();
    assert!(svg_text.starts_with("<svg"));

    // Byte-identical across runs.
    let again = bin()
        .args(["splice", "3,5", "2,7", "--matrix", "1,0,-1,-1"])
        .output()
        .unwrap();
    let once_more = bin()
        .args(["splice", "3,5", "2,7", "--matrix", "1,0,-1,-1"])
        .output()
        .unwrap();
    assert_eq!(again.stdout, once_more.stdout);
}

#[test]
fn splice_with_composite_right_side() {
    let out = bin()
        .args(["splice", "3,5", "--sum=-2,7,-2,7", "--matrix", "1,0,-1,-1"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["counts"]["wedges_of_two_spheres"].as_u64().unwrap() >= 1);
    assert!(v["counts"]["non_manifold_components"].as_u64().unwrap() >= 1);
    // The wedge carries a two-circle link at its singular point.
    let comps = v["components"].as_array().unwrap();
    let wedge = comps
        .iter()
        .find(|c| c["topology"] == "wedge of two 2-spheres")
        .expect("wedge component");
    let has_two_circle_link = wedge["links"].as_array().unwrap().iter().any(|l| {
        l["pieces"] == serde_json::json!(["Circle", "Circle"])
            && l["manifold"] == serde_json::json!(false)
    });
    assert!(has_two_circle_link);
}

#[test]
fn verify_homology_only_passes() {
    let out = bin().args(["verify", "--homology-only"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("criterion 1: PASS"));
}

#[test]
fn usage_errors_exit_64() {
    let out = bin().args(["splice", "3,5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(64));
    let out = bin().args(["nonsense"]).output().unwrap();
    assert_eq!(out.status.code(), Some(64));
    let out = bin().args(["splice", "3,5", "2,7", "--matrix", "2,0,0,1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn verify_writes_figures() {
    let dir = std::env::temp_dir().join("charvar-figs-test");
    std::fs::create_dir_all(&dir).unwrap();
    let out = bin()
        .args(["verify", "--homology-only", "--figures", "--figures-dir", dir.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    for name in ["fig1.svg", "fig2.svg", "fig3.svg", "fig4.svg", "fig5.svg"] {
        let text = std::fs::read_to_string(dir.join(name)).unwrap();
        assert!(text.starts_with("<svg"), "{name}");
    }
}
