use std::io::Write;
use std::process::{Command, Output, Stdio};

use bergman::funcrep::PowerRep;
use serde_json::{json, Value};

fn bergman(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_bergman"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    let mut input = child.stdin.take().unwrap();
    input.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(input);
    child.wait_with_output().unwrap()
}

fn report(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| bergman(args, None).status.code();
    assert_eq!(code(&["interpolate", r#"{"p": 4, "values": [1, 0.5]}"#]), Some(0));
    // Malformed input.
    assert_eq!(code(&["interpolate", "{not json"]), Some(1));
    assert_eq!(code(&["divisor", "--p", "3", "--zeros", "[[0.5, 0]]"]), Some(1));
    assert_eq!(code(&["extremal-znb", r#"{"p": 0.5, "N": 2, "b": 1}"#]), Some(1));
    // Data for which no admissible solution exists.
    assert_eq!(code(&["interpolate", r#"{"p": 4, "values": [1, 2]}"#]), Some(2));
    // Iteration budget exhausted.
    assert_eq!(code(&["oracle", "--iters", "1", r#"{"mode": "interpolate", "p": 4, "values": [1, 0.5]}"#]), Some(3));
}

#[test]
fn errors_are_reported_as_json() {
    let out = bergman(&["interpolate", r#"{"p": 4, "values": [1, 2]}"#], None);
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["exit_code"], json!(2));
    assert!(err["error"]["message"].as_str().unwrap().len() > 10);
    assert!(out.stdout.is_empty());
}

#[test]
fn output_is_deterministic_without_timing() {
    let args = ["--no-timing", "divisor", "--p", "4", "--zeros", "[[0.3, 0], [[0, -0.4], 1]]"];
    let (a, b) = (bergman(&args, None), bergman(&args, None));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(report(&a).get("timing_ms").is_none());
    assert!(report(&bergman(&args[1..], None))["timing_ms"].is_number());
}

#[test]
fn emitted_functions_round_trip_bit_for_bit() {
    let r = report(&bergman(&["--no-timing", "extremal-znb", r#"{"p": 3, "N": 2, "b": [0, 1.8]}"#], None));
    let f = &r["result"]["report"]["F"];
    let parsed: PowerRep = serde_json::from_value(f.clone()).unwrap();
    let text = bergman::json::to_string(&parsed).unwrap();
    assert_eq!(serde_json::from_str::<Value>(&text).unwrap(), *f);

    // Feeding the function back in certifies it again.
    let verify = json!({ "F": f, "p": 3, "allowed": { "monomials": [0, 2] } });
    let v = report(&bergman(&["--no-timing", "verify", &verify.to_string()], None));
    assert_eq!(v["result"]["passed"], json!(true));
}

#[test]
fn envelope_from_stdin() {
    let env = json!({
        "version": 1,
        "command": "a4-onezero",
        "params": { "v1": -1.5, "v2": -1.642857142857143 },
        "rule": [48, 192],
    });
    let r = report(&bergman(&["--no-timing", "run", "-"], Some(&env.to_string())));
    assert_eq!(r["command"], json!("a4-onezero"));
    assert_eq!(r["rule"], json!([48, 192]));
    assert!(r["result"].is_object());

    let bad = json!({ "version": 2, "command": "a4-onezero", "params": {} });
    assert_eq!(bergman(&["run", "-"], Some(&bad.to_string())).status.code(), Some(1));
}

#[test]
fn render_writes_a_graymap() {
    let d = report(&bergman(&["--no-timing", "divisor", "--p", "2", "--zeros", "[[0.5, 0]]"], None));
    let params = json!({ "F": d["result"]["report"]["F"] }).to_string();
    let out = bergman(&["render", "--grid", "32", &params], None);
    assert_eq!(out.status.code(), Some(0));
    let bytes = out.stdout;
    assert!(bytes.starts_with(b"P5\n# |F| min="));
    assert!(bytes.windows(10).any(|w| w == b"\n32 32\n255"));
    let pixels = &bytes[bytes.len() - 32 * 32..];
    // Corners lie outside the disc; the zero at 0.5 is the darkest interior pixel.
    assert_eq!(pixels[0], 0);
    let (row, col) = (15, 23);
    let inside = (0..32 * 32).filter(|i| {
        let (r, c) = (i / 32, i % 32);
        let (x, y) = (-1.0 + (c as f64 + 0.5) / 16.0, 1.0 - (r as f64 + 0.5) / 16.0);
        x * x + y * y < 1.0
    });
    let darkest = inside.min_by_key(|&i| pixels[i]).unwrap();
    assert!(((darkest / 32) as i64 - row).abs() <= 1 && ((darkest % 32) as i64 - col).abs() <= 1, "{darkest}");
}

#[test]
fn schema_lists_every_command() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/schema.json")).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    let listed = schema["properties"]["command"]["enum"].as_array().unwrap();
    let help = String::from_utf8(bergman(&["--help"], None).stdout).unwrap();
    for name in listed {
        let name = name.as_str().unwrap();
        assert!(help.contains(name), "{name}");
        assert!(schema["$defs"]["params"][name].is_object(), "{name}");
    }
}
