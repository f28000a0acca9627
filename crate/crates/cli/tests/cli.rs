use std::process::{Command, Output};

fn singclass(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_singclass"))
        .args(args)
        .env_remove("SINGCLASS_MAX_CODIM")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).trim_end().to_string()
}

#[test]
fn psi_power_text() {
    let out = singclass(&["psi", "2", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "1/2*a_2 + 1/4*i[1,1] + 3/2*xi*a_1 + xi^2");
}

#[test]
fn completed_cycle_text() {
    let out = singclass(&["completed-cycle", "2"]);
    assert_eq!(stdout(&out), "1/2*C[3] + 1/4*C[1,1] + 1/24*C[1]");
    let out = singclass(&["completed-cycle", "2", "--genus0"]);
    assert_eq!(stdout(&out), "1/2*C[3] + 1/4*C[1,1]");
}

#[test]
fn conversions_and_formats() {
    let out = singclass(&["to-sing", "d[0,1]"]);
    assert_eq!(stdout(&out), "i[1,2] + xi*i[1,1]");
    let out = singclass(&["to-sing", "d[0,1]", "--format", "latex"]);
    assert_eq!(stdout(&out), "i_{1,2} + \\xi i_{1,1}");
    let out = singclass(&["to-basic", "i[1,2]", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["basis"], "basic");
    assert_eq!(v["codim"], 3);
    assert_eq!(v["terms"][1]["coeff"], "-1");
    assert_eq!(v["terms"][1]["xi_power"], 1);
}

#[test]
fn json_is_stable_across_runs() {
    let a = stdout(&singclass(&["psi", "4", "--format", "json"]));
    let b = stdout(&singclass(&["psi", "4", "--format", "json"]));
    assert_eq!(a, b);
}

#[test]
fn cycles_characters_and_coefficients() {
    let out = singclass(&["multiply-cycles", "{2}", "{2}", "--verify-at", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "C[2,2] + 3*C[3] + 1/2*C[1,1]");
    assert_eq!(stdout(&singclass(&["char", "[3,1]", "[2,2]"])), "-1");
    assert_eq!(stdout(&singclass(&["coeff", "psi", "4", "{1,1,1}"])), "1/36");
    assert_eq!(stdout(&singclass(&["coeff", "delta", "0,2", "{1,3}"])), "1/2");
    assert_eq!(stdout(&singclass(&["x-poly", "2"])), "1/2*x_3 + 1/4*x_1^2");
}

#[test]
fn local_model_coordinates() {
    let out = singclass(&["local-model", "{2}", "0", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("z = 1 (order 2): u = 1, a = [2]"), "{text}");
    assert!(text.contains("constant = 1"), "{text}");
}

#[test]
fn verify_suites_pass() {
    for suite in ["appendix", "cycles", "equality"] {
        let out = singclass(&["verify", suite]);
        assert_eq!(out.status.code(), Some(0), "{suite}: {}", stdout(&out));
    }
    let out = singclass(&["verify", "ko", "--max-m", "3"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn exit_codes() {
    // Parse errors.
    assert_eq!(singclass(&["to-sing", "d[0,1"]).status.code(), Some(2));
    assert_eq!(singclass(&["psi", "two"]).status.code(), Some(2));
    assert_eq!(singclass(&["psi", "2", "--bogus"]).status.code(), Some(2));
    // Constraint violations.
    assert_eq!(singclass(&["to-sing", "a_2"]).status.code(), Some(3));
    assert_eq!(singclass(&["local-model", "{1,1}", "0", "1,1"]).status.code(), Some(3));
    let capped = Command::new(env!("CARGO_BIN_EXE_singclass"))
        .args(["psi", "4"])
        .env("SINGCLASS_MAX_CODIM", "3")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(3));
}
