use std::io::Write;
use std::process::Command;

/// Run the binary on `job`, returning the exit code, stdout and stderr.
fn run_full(job: &str, extra: &[&str]) -> (i32, String, String) {
    let mut file = tempfile();
    file.1.write_all(job.as_bytes()).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_quadlat")).arg("--input").arg(&file.0).args(extra).output().unwrap();
    std::fs::remove_file(&file.0).ok();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn run_bin(job: &str, extra: &[&str]) -> (i32, String) {
    let (code, _, err) = run_full(job, extra);
    (code, err)
}

fn tempfile() -> (std::path::PathBuf, std::fs::File) {
    use std::sync::atomic::{AtomicUsize, Ordering};
    static N: AtomicUsize = AtomicUsize::new(0);
    let path = std::env::temp_dir().join(format!(
        "quadlat-job-{}-{}.json",
        std::process::id(),
        N.fetch_add(1, Ordering::SeqCst)
    ));
    let f = std::fs::File::create(&path).unwrap();
    (path, f)
}

#[test]
fn success_is_zero_regardless_of_verdict() {
    let job = r#"{"command":"embeds","base":{"kind":"padic","p":3},"gram_n":[["3"]],"gram":[["1"]]}"#;
    assert_eq!(run_bin(job, &[]).0, 0);
}

#[test]
fn malformed_inputs_exit_2_and_name_the_field() {
    let cases = [
        (r#"{"command":"jordan","base":{"kind":"padic","p":3},"gram":[["1","2"],["0","3"]]}"#, "gram"),
        (r#"{"command":"jordan","base":{"kind":"padic","p":3},"gram":[["1/0"]]}"#, "gram[0][0]"),
        (r#"{"command":"jordan","base":{"kind":"padic","p":3},"gram":[["1/-2"]]}"#, "gram[0][0]"),
        (r#"{"command":"jordan","base":{"kind":"padic","p":3}}"#, "gram"),
        (r#"{"command":"frobnicate","base":{"kind":"padic","p":3}}"#, "command"),
        (r#"{"command":"hilbert","base":{"kind":"laurent","q":3},"a":[5],"b":[1]}"#, "a"),
        (
            r#"{"command":"global-embeds","base":{"kind":"laurent","q":3},"gram_n":[[[0,1]]],"gram":[[[1]]],"places":[[2,0,1]]}"#,
            "places[0]",
        ),
        (r#"{"command":"springer","base":{"kind":"padic","p":3},"gram_n":[["1"]],"gram":[["1"]]}"#, "tower"),
        (r#"not json"#, "job document"),
    ];
    for (job, field) in cases {
        let (code, err) = run_bin(job, &[]);
        assert_eq!(code, 2, "{job}: {err}");
        assert!(err.contains(field), "{job}: message {err:?} does not name {field}");
    }
}

#[test]
fn unsupported_requests_exit_3() {
    let cases = [
        r#"{"command":"hilbert","base":{"kind":"padic","p":2},"a":"1","b":"1"}"#,
        r#"{"command":"jordan","base":{"kind":"laurent","q":9,"place":[1,1,1,1,1,1,1,1,1,1,1]},"gram":[[[1]]]}"#,
        r#"{"command":"global-embeds","base":{"kind":"laurent","q":3},"gram_n":[[[0,1]]],"gram":[[[1]]]}"#,
    ];
    for job in cases {
        let (code, err) = run_bin(job, &[]);
        assert_eq!(code, 3, "{job}: {err}");
    }
}

#[test]
fn springer_even_degree_makes_no_consistency_claim() {
    let job = r#"{"command":"springer","base":{"kind":"padic","p":3},"tower":[{"kind":"unramified","degree":2}],"gram_n":[["2"]],"gram":[["1"]]}"#;
    let (code, out, _) = run_full(job, &[]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdicts"]["degree_odd"], false);
    assert!(v["verdicts"].get("consistent").is_none());
}
