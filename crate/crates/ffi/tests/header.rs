//! Compiles and runs a C client against the generated header and the static
//! library. Skipped when no C compiler is on PATH.

use std::path::{Path, PathBuf};
use std::process::Command;

const CLIENT: &str = r#"
#include "frobml.h"
#include <stdio.h>
#include <string.h>

int main(void) {
    const char *json =
        "{\"field\":{\"p\":7,\"vars\":[\"t\"]},\"group\":{\"multiplicative\":1},"
        "\"generators\":[{\"mul\":[\"t\"]}],\"variety\":[],"
        "\"options\":{\"r\":1,\"digits\":[{\"mul\":[\"t^-4\"]},{\"mul\":[\"t^-3\"]},{\"mul\":[\"t^-2\"]},"
        "{\"mul\":[\"t^-1\"]},{\"mul\":[\"1\"]},{\"mul\":[\"t\"]},{\"mul\":[\"t^2\"]},{\"mul\":[\"t^3\"]},{\"mul\":[\"t^4\"]}]}}";
    FmlProblem *p = NULL;
    FmlAnalysis *a = NULL;
    bool coset = false;
    if (fml_problem_from_json(json, NULL, &p) != FML_STATUS_OK) return 1;
    if (fml_analyze(p, &a) != FML_STATUS_OK) return 2;
    if (fml_decide(a, FML_QUESTION_INFINITE_COSET, &coset) != FML_STATUS_OK) return 3;
    if (!coset) return 4;
    if (fml_problem_from_json("{", NULL, &p) != FML_STATUS_INVALID_INPUT) return 5;
    if (fml_last_error() == NULL) return 6;
    fml_analysis_free(a);
    printf("ok\n");
    return 0;
}
"#;

fn compiler() -> Option<String> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
        .map(String::from)
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/frobml.h")).unwrap();
    for name in [
        "typedef struct FmlProblem FmlProblem;",
        "typedef struct FmlAnalysis FmlAnalysis;",
        "FML_STATUS_CAP_EXCEEDED = 3",
        "fml_problem_from_json(",
        "fml_analyze(",
        "fml_decide(",
        "fml_decompose_json(",
        "fml_census_csv(",
        "fml_count_by_height(",
        "fml_hull_json(",
        "fml_last_error(",
        "fml_string_free(",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

#[test]
fn c_client_links_and_runs() {
    let Some(cc) = compiler() else {
        eprintln!("no C compiler; skipping");
        return;
    };
    let lib = target_dir().join("libfrobml_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("client.c");
    let bin = dir.path().join("client");
    std::fs::write(&src, CLIENT).unwrap();
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C client failed to compile");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "C client exited with {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok\n");
}
