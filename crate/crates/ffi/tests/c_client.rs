//! Compiles a small C program against the generated header and the static
//! library, then runs it.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include "lorenz_renorm.h"

int main(void) {
    LrInterval r;
    LrInterval a = {1.0, 1.0}, z = {-1.0, 1.0};
    if (lr_interval_div(a, z, &r) != LR_STATUS_RECIP_NOT_WELL_DEFINED) return 10;
    LrInput *input = NULL;
    if (lr_input_new(13, "2.2", "0.5", &input) != LR_STATUS_OK) return 11;
    LrSession *session = NULL;
    if (lr_run(input, &session) != LR_STATUS_OK) {
        fprintf(stderr, "%s\n", lr_last_error_message());
        return 12;
    }
    double eps = 0.0, theta = 0.0;
    bool ok = false;
    lr_session_eps(session, &eps);
    lr_session_theta(session, &theta);
    lr_session_contraction_ok(session, &ok);
    printf("eps=%.3e theta=%.3f ok=%d\n", eps, theta, (int)ok);
    lr_session_free(session);
    lr_input_free(input);
    return ok ? 0 : 13;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let deps = std::env::current_exe().unwrap().parent().unwrap().to_path_buf();
    let lib = deps.join("liblorenz_renorm_ffi.a");
    assert!(lib.exists(), "static library not found at {}", lib.display());
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let src = dir.join("client.c");
    let exe = dir.join("client");
    std::fs::write(&src, PROGRAM).unwrap();

    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl"])
        .status()
        .expect("run cc");
    assert!(status.success(), "C compile failed");

    let out = Command::new(&exe).output().unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "client exit {:?}: {stdout} {}", out.status, String::from_utf8_lossy(&out.stderr));
    assert!(stdout.contains("ok=1"), "{stdout}");
}
