//! Compiles a small C program against the generated header and, when the
//! static library is present, links and runs it.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include "lpquts.h"

int main(void) {
    double w[3] = {1.0, 1.0, 1.0};
    uint32_t e[6] = {0, 1, 1, 2, 0, 2};
    LqGraph *g = NULL;
    if (lq_graph_new(3, w, 3, e, &g) != LQ_STATUS_OK) return 1;
    LqSolveConfig cfg = lq_solve_config_default();
    cfg.sampler = LQ_SAMPLER_GREEDY;
    LqReport *r = NULL;
    if (lq_solve(g, &cfg, &r) != LQ_STATUS_OK) { fprintf(stderr, "%s\n", lq_last_error()); return 2; }
    printf("%.3f %.3f %d\n", lq_report_upper(r), lq_report_lower(r), (int)lq_report_converged(r));
    char *json = lq_report_json(r);
    if (json == NULL) return 3;
    lq_string_free(json);
    lq_report_free(r);
    lq_graph_free(g);
    return 0;
}
"#;

fn compiler() -> Option<String> {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    Command::new(&cc).arg("--version").output().ok().filter(|o| o.status.success()).map(|_| cc)
}

fn include_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include")
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(include_dir().join("lpquts.h")).unwrap();
    for name in [
        "lq_last_error",
        "lq_graph_new",
        "lq_graph_read",
        "lq_graph_free",
        "lq_exact",
        "lq_solve",
        "lq_report_json",
        "lq_string_free",
        "lq_stt",
        "typedef struct LqGraph LqGraph",
        "LQ_STATUS_BUFFER_TOO_SMALL",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

#[test]
fn c_program_compiles_and_runs() {
    let Some(cc) = compiler() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(&src, PROGRAM).unwrap();
    let inc = include_dir();

    let check = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&inc)
        .arg(&src)
        .output()
        .unwrap();
    assert!(check.status.success(), "{}", String::from_utf8_lossy(&check.stderr));

    // target/<profile>/deps/<test> -> target/<profile>/liblpquts_ffi.a
    let exe = std::env::current_exe().unwrap();
    let lib = exe.parent().and_then(Path::parent).map(|d| d.join("liblpquts_ffi.a"));
    let Some(lib) = lib.filter(|p| p.exists()) else {
        eprintln!("static library not built; syntax check only");
        return;
    };
    let bin = dir.path().join("main");
    let link = Command::new(&cc)
        .arg("-I")
        .arg(&inc)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(link.status.success(), "{}", String::from_utf8_lossy(&link.stderr));
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "1.000 1.000 1");
}
