//! Compiles a small C program against the generated header and the staticlib,
//! then runs it. Exercises the ABI the way a real consumer does.

use std::env;
use std::fs;
use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "afclink.h"

int main(void) {
    AfclinkSpectrum *spec = NULL;
    int rc = afclink_spectrum_new("", &spec);
    if (rc != AFCLINK_OK) {
        fprintf(stderr, "spectrum_new: %s\n", afclink_last_error_message());
        return 1;
    }
    size_t n = afclink_spectrum_len(spec);
    if (n == 0) return 2;
    double od_center = afclink_spectrum_sample_od(spec, 0.0);
    double od_gap = afclink_spectrum_sample_od(spec, 1.0e6);
    if (!(od_center > od_gap)) return 3;
    afclink_spectrum_free(spec);

    AfclinkEchoSummary echo;
    memset(&echo, 0, sizeof echo);
    rc = afclink_echo_run("", &echo);
    if (rc != AFCLINK_OK) return 4;
    if (!(echo.efficiency > 0.07 && echo.efficiency < 0.09)) return 5;
    if (!(echo.delay_s > 300.0e-9 && echo.delay_s < 500.0e-9)) return 6;

    rc = afclink_echo_run("[afc]\ntooth_fwhm_hz = 3.0e6\n", &echo);
    if (rc != AFCLINK_ERR_CONFIG) return 7;
    if (strstr(afclink_last_error_message(), "tooth_fwhm_hz") == NULL) return 8;

    printf("ok n=%zu eff=%.4f\n", n, echo.efficiency);
    return 0;
}
"#;

fn cc_available() -> bool {
    Command::new("cc")
        .arg("--version")
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false)
}

fn static_lib() -> Option<PathBuf> {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let mut candidates = Vec::new();
    if let Ok(dir) = env::var("CARGO_TARGET_DIR") {
        candidates.push(PathBuf::from(dir));
    }
    candidates.push(manifest.join("../../target"));
    for target in candidates {
        for profile in ["debug", "release"] {
            let lib = target.join(profile).join("libafclink_ffi.a");
            if lib.exists() {
                return Some(lib);
            }
        }
    }
    None
}

#[test]
fn c_program_links_and_runs() {
    if !cc_available() {
        eprintln!("skipping: no C compiler on PATH");
        return;
    }
    // `cargo test` alone does not refresh the staticlib artifact
    let build = Command::new(env!("CARGO"))
        .args(["build", "-p", "afclink-ffi"])
        .current_dir(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../.."))
        .output()
        .expect("cargo runs");
    assert!(
        build.status.success(),
        "staticlib build failed:\n{}",
        String::from_utf8_lossy(&build.stderr)
    );
    let Some(lib) = static_lib() else {
        panic!("staticlib not found next to the test build");
    };
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    assert!(include.join("afclink.h").exists(), "header was not generated");

    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let bin = dir.path().join("smoke");
    fs::write(&src, PROGRAM).unwrap();

    let compile = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .expect("cc runs");
    assert!(
        compile.status.success(),
        "compile failed:\n{}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&bin).output().expect("smoke binary runs");
    assert!(
        run.status.success(),
        "smoke binary exited {:?}: {}",
        run.status.code(),
        String::from_utf8_lossy(&run.stderr)
    );
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(stdout.starts_with("ok "), "unexpected output: {stdout}");
}
