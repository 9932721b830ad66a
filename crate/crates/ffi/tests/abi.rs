use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use augsched_ffi::*;

fn last_error() -> String {
    let p = augsched_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn path_graph(n: usize) -> *mut AugGraph {
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(augsched_graph_new(n, &mut g), AugStatus::Ok);
        for i in 0..n - 1 {
            let mut id = usize::MAX;
            assert_eq!(augsched_graph_add_link(g, i, i + 1, &mut id), AugStatus::Ok);
            assert_eq!(id, i);
        }
    }
    g
}

#[test]
fn graph_handles() {
    let g = path_graph(5);
    unsafe {
        assert_eq!(augsched_graph_node_count(g), 5);
        assert_eq!(augsched_graph_link_count(g), 4);
        assert_eq!(augsched_graph_add_link(g, 2, 2, ptr::null_mut()), AugStatus::InvalidGraph);
        assert_eq!(augsched_graph_add_link(g, 0, 7, ptr::null_mut()), AugStatus::InvalidNode);
        assert!(last_error().contains('7'));
        augsched_graph_free(g);
        augsched_graph_free(ptr::null_mut());
        assert_eq!(augsched_graph_link_count(ptr::null()), 0);

        let mut grid = ptr::null_mut();
        assert_eq!(augsched_graph_grid(11, 11, &mut grid), AugStatus::Ok);
        assert_eq!(augsched_graph_node_count(grid), 121);
        assert_eq!(augsched_graph_link_count(grid), 220);
        augsched_graph_free(grid);
        assert_eq!(augsched_graph_new(3, ptr::null_mut()), AugStatus::NullPointer);
    }
}

#[test]
fn graph_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tri.graph");
    std::fs::write(&path, "# triangle\nnodes 3\nlink 0 1\nlink 1 2\nlink 2 0\n").unwrap();
    let c = CString::new(path.to_str().unwrap()).unwrap();
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(augsched_graph_from_file(c.as_ptr(), &mut g), AugStatus::Ok);
        assert_eq!(augsched_graph_link_count(g), 3);
        augsched_graph_free(g);
        let missing = CString::new(dir.path().join("none").to_str().unwrap()).unwrap();
        assert_eq!(augsched_graph_from_file(missing.as_ptr(), &mut g), AugStatus::Io);
        std::fs::write(&path, "nodes 2\nlink 0 x\n").unwrap();
        assert_eq!(augsched_graph_from_file(c.as_ptr(), &mut g), AugStatus::Parse);
    }
}

#[test]
fn matching_and_bounds() {
    let g = path_graph(5);
    let q = [1u64, 5, 1, 5];
    let mut buf = [0usize; 4];
    let (mut len, mut w) = (0usize, 0u64);
    unsafe {
        let s = augsched_max_weight_matching(g, q.as_ptr(), 4, buf.as_mut_ptr(), 4, &mut len, &mut w);
        assert_eq!(s, AugStatus::Ok);
        assert_eq!((&buf[..len], w), (&[1, 3][..], 10));

        let s = augsched_max_weight_matching(g, q.as_ptr(), 4, buf.as_mut_ptr(), 1, &mut len, &mut w);
        assert_eq!(s, AugStatus::BufferTooSmall);
        assert_eq!(len, 2);
        let s = augsched_max_weight_matching(g, q.as_ptr(), 3, buf.as_mut_ptr(), 4, &mut len, &mut w);
        assert_eq!(s, AugStatus::LengthMismatch);

        let mut d = 0.0;
        assert_eq!(augsched_delta_lower_bound(0.5, 1, 1, 1, &mut d), AugStatus::Ok);
        assert_eq!(d, 0.5);
        assert_eq!(augsched_delta_lower_bound(1.5, 1, 1, 1, &mut d), AugStatus::Domain);
        augsched_graph_free(g);
    }
}

#[test]
fn control_part_is_seeded() {
    let g = path_graph(6);
    let q = [1u64, 6, 1, 6, 1];
    let prev = [0usize, 2, 4];
    let run = |seed| {
        let mut buf = [0usize; 5];
        let mut len = 0;
        let s = unsafe {
            augsched_control_part(g, q.as_ptr(), 5, prev.as_ptr(), 3, 2, 0.5, seed, buf.as_mut_ptr(), 5, &mut len)
        };
        assert_eq!(s, AugStatus::Ok);
        buf[..len].to_vec()
    };
    assert_eq!(run(7), run(7));
    let out = run(7);
    let weight: u64 = out.iter().map(|&l| q[l]).sum();
    assert!(weight >= 3, "never worse than the previous schedule");

    let bad = [0usize, 1];
    let mut len = 0;
    let s =
        unsafe { augsched_control_part(g, q.as_ptr(), 5, bad.as_ptr(), 2, 2, 0.5, 1, ptr::null_mut(), 0, &mut len) };
    assert_eq!(s, AugStatus::NotAMatching);
    unsafe { augsched_graph_free(g) };
}

#[test]
fn simulation() {
    let mut g = ptr::null_mut();
    unsafe { assert_eq!(augsched_graph_grid(4, 4, &mut g), AugStatus::Ok) };
    let mut cfg = AugSimConfig {
        algorithm: AugAlgorithm::Aug,
        k: 2,
        p: 0.2,
        preset: AugPreset::Fig5,
        lambda: 0.0,
        horizon: 1_000,
        warmup: 0,
        seed: 1,
        slope_threshold: 0.0,
    };
    let mut out = AugSimResult::default();
    unsafe {
        assert_eq!(augsched_run_simulation(g, &cfg, &mut out), AugStatus::Ok);
        assert_eq!(out.final_total_backlog, 0);
        assert!(out.stable);
        cfg.lambda = 0.5;
        cfg.algorithm = AugAlgorithm::Mm;
        let mut again = AugSimResult::default();
        assert_eq!(augsched_run_simulation(g, &cfg, &mut out), AugStatus::Ok);
        assert_eq!(augsched_run_simulation(g, &cfg, &mut again), AugStatus::Ok);
        assert_eq!(out, again);
        cfg.k = 0;
        cfg.algorithm = AugAlgorithm::Aug;
        assert_eq!(augsched_run_simulation(g, &cfg, &mut out), AugStatus::Config);

        // grid presets are refused once the grid is edited
        assert_eq!(augsched_graph_add_link(g, 0, 5, ptr::null_mut()), AugStatus::Ok);
        cfg.k = 2;
        assert_ne!(augsched_run_simulation(g, &cfg, &mut out), AugStatus::Ok);
        cfg.preset = AugPreset::Uniform;
        assert_eq!(augsched_run_simulation(g, &cfg, &mut out), AugStatus::Ok);
        augsched_graph_free(g);
    }
}

#[test]
fn header_compiles_and_links_from_c() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libaugsched_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library");
        return;
    }
    let exe = tempfile::tempdir().unwrap();
    let bin = exe.path().join("smoke");
    let status = Command::new("cc")
        .arg(crate_dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "mwm 2 4\n");
}
