use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use spinecycles_ffi::*;

#[test]
fn graph_handle_roundtrip() {
    unsafe {
        let mut g: *mut ScGraph = ptr::null_mut();
        assert_eq!(sc_graph_build(4643, 3, 0, &mut g), ScStatus::Ok);
        assert!(!g.is_null());
        assert_eq!(sc_graph_vertex_count(g), 388);
        assert!(sc_graph_spine_size(g) > 0);

        let mut counts = ScCycleCounts::default();
        assert_eq!(sc_graph_cycle_census(g, 3, &mut counts), ScStatus::Ok);
        assert_eq!(
            (
                counts.n_s,
                counts.n_t,
                counts.max_spine_count,
                counts.tainted
            ),
            (4, 8, 1, 0)
        );

        let (mut a, mut b) = (0u64, 0u64);
        assert_eq!(sc_graph_vertex(g, 0, &mut a, &mut b), ScStatus::Ok);
        assert!(a < 4643 && b < 4643);
        assert_eq!(
            sc_graph_vertex(g, 388, &mut a, &mut b),
            ScStatus::OutOfRange
        );
        assert_eq!(
            sc_graph_cycle_census(g, 11, &mut counts),
            ScStatus::InvalidArgument
        );
        sc_graph_free(g);
    }
}

#[test]
fn graph_errors() {
    unsafe {
        let mut g: *mut ScGraph = ptr::null_mut();
        assert_eq!(sc_graph_build(13, 2, 0, &mut g), ScStatus::InvalidArgument);
        assert!(g.is_null());
        let msg = CStr::from_ptr(sc_last_error_message()).to_str().unwrap();
        assert!(msg.contains("13"), "{msg}");
        assert_eq!(
            sc_graph_build(101, 2, 0, ptr::null_mut()),
            ScStatus::NullPointer
        );
        assert_eq!(sc_graph_vertex_count(ptr::null()), 0);
        sc_graph_free(ptr::null_mut());
    }
}

#[test]
fn formula_calls() {
    unsafe {
        let mut pred = ScPrediction::default();
        assert_eq!(sc_predict(3, 3, 4643, &mut pred), ScStatus::Ok);
        assert_eq!(
            (pred.n_s, pred.n_t, pred.valid, pred.experimental),
            (4, 8, 1, 0)
        );
        assert_eq!(sc_predict(3, 3, 101, &mut pred), ScStatus::BoundViolation);

        let (mut num, mut den, mut conj) = (0i64, 0i64, 9u8);
        assert_eq!(
            sc_average_limit(3, 3, &mut num, &mut den, &mut conj),
            ScStatus::Ok
        );
        assert_eq!((num, den, conj), (7, 1, 0));

        let mut bound = ScBound::default();
        assert_eq!(sc_kaneko_bound(3, 3, &mut bound), ScStatus::Ok);
        assert_eq!((bound.m_num, bound.m_den, bound.strong_den), (2782, 1, 0));
        assert_eq!(sc_kaneko_bound(2, 6, &mut bound), ScStatus::Ok);
        assert_eq!((bound.m_num, bound.m_den), (62985, 4));
        assert_eq!((bound.strong_num, bound.strong_den), (15113, 4));
    }
}

#[test]
fn disc_set_handle() {
    unsafe {
        let mut set: *mut ScDiscSet = ptr::null_mut();
        assert_eq!(sc_disc_set_new(3, 3, 0, &mut set), ScStatus::Ok);
        let n = sc_disc_set_len(set);
        let values: Vec<i64> = (0..n)
            .map(|i| {
                let mut v = 0;
                assert_eq!(sc_disc_set_get(set, i, &mut v), ScStatus::Ok);
                v
            })
            .collect();
        assert_eq!(values, vec![-107, -104, -92, -83, -59, -44, -23, -11, -8]);
        let mut v = 0;
        assert_eq!(sc_disc_set_get(set, n, &mut v), ScStatus::OutOfRange);
        sc_disc_set_free(set);

        assert_eq!(sc_disc_set_new(3, 3, 1, &mut set), ScStatus::Ok);
        assert_eq!(sc_disc_set_len(set), 7);
        sc_disc_set_free(set);
    }
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/spinecycles.h"),
    )
    .unwrap();
    for name in [
        "sc_last_error_message",
        "sc_graph_build",
        "sc_graph_free",
        "sc_graph_vertex_count",
        "sc_graph_spine_size",
        "sc_graph_vertex",
        "sc_graph_cycle_census",
        "sc_predict",
        "sc_average_limit",
        "sc_kaneko_bound",
        "sc_disc_set_new",
        "sc_disc_set_len",
        "sc_disc_set_get",
        "sc_disc_set_free",
        "typedef struct ScGraph ScGraph;",
        "SC_STATUS_OK = 0",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "spinecycles.h"

int main(void) {
    ScGraph *g = NULL;
    if (sc_graph_build(4643, 3, 0, &g) != SC_STATUS_OK) return 10;
    ScCycleCounts c;
    if (sc_graph_cycle_census(g, 3, &c) != SC_STATUS_OK) return 11;
    ScPrediction p;
    if (sc_predict(3, 3, 4643, &p) != SC_STATUS_OK) return 12;
    printf("%zu %llu %llu %llu %llu\n", sc_graph_vertex_count(g),
           (unsigned long long)c.n_s, (unsigned long long)c.n_t,
           (unsigned long long)p.n_s, (unsigned long long)p.n_t);
    sc_graph_free(g);
    return 0;
}
"#;

#[test]
fn c_program_links_against_static_library() {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("libspinecycles_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: static library or C compiler not available");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let bin = dir.path().join("main");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "388 4 8 4 8");
}
