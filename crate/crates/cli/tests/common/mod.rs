//! Golden-file cases shared by the golden test and the acceptance harness.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

pub struct Case {
    pub name: String,
    pub args: Vec<String>,
    pub stdin: Option<String>,
    pub status: i32,
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
}

fn case(name: &str, args: &[&str], stdin: Option<&[&str]>) -> Case {
    Case {
        name: name.to_string(),
        args: args.iter().map(|s| s.to_string()).collect(),
        stdin: stdin.map(|lines| lines.iter().map(|l| format!("{l}\n")).collect()),
        status: 0,
    }
}

pub fn cases() -> Vec<Case> {
    let common_vectors = [
        "d=2",
        "*=1",
        "*=1; d=-3",
        "*=1; [1,1]=1",
        "*=2; [1,1]=1; [2,1]=1",
        "*=2; [1,1]=1; [2,1]=1; d=1",
        "[1,1]=1; [2,1]=1",
        "*=-1; [1,1]=-1; d=4",
        "*=1; [1,1]=-1",
        "0",
        r#"{"star":1,"branch":BRANCH,"delta":-1}"#,
    ];
    let pairs = [
        "d=1 | d=1",
        "*=1 | *=1",
        "*=1 | [1,1]=1",
        "*=1; [1,1]=1 | *=2; [2,1]=1; d=5",
    ];
    let types: [(&str, &str, &str, &[&str]); 3] = [
        (
            "p22",
            "2,2",
            "[[1],[0]]",
            &[
                "S[1,0]^-3",
                "S[2,1]",
                "S[1,1]^2",
                "Sgen^4",
                "O(k=-2;a=1,0)",
                "O(k=1;a=3,-1)",
            ],
        ),
        (
            "p23",
            "2,3",
            "[[1],[0,1]]",
            &[
                "S[2,0]^-2",
                "S[2,2]^4",
                "Sgen",
                "O(k=0;a=0,2)",
                "O(k=-1;a=5,-4)",
            ],
        ),
        (
            "p333",
            "3,3,3",
            "[[1,1],[0,0],[1,0]]",
            &[
                "S[3,1]^5",
                "S[1,0]^-1",
                "Sgen^2",
                "O(k=2;a=1,2,0)",
                "O(k=0;a=-1,-1,-1)",
            ],
        ),
    ];
    let mut out = Vec::new();
    for (tag, weights, branch, objects) in types {
        let vectors: Vec<String> = common_vectors
            .iter()
            .map(|v| v.replace("BRANCH", branch))
            .collect();
        let vectors: Vec<&str> = vectors.iter().map(String::as_str).collect();
        out.push(case(
            &format!("classify_{tag}"),
            &["classify", "--weights", weights, "--stdin"],
            Some(&vectors),
        ));
        out.push(case(
            &format!("roots_{tag}"),
            &[
                "roots",
                "--weights",
                weights,
                "--max-height",
                "6",
                "--delta",
                "-1..1",
            ],
            None,
        ));
        out.push(case(
            &format!("pair_{tag}"),
            &["pair", "--weights", weights, "--stdin"],
            Some(&pairs),
        ));
        out.push(case(
            &format!("encode_{tag}"),
            &["encode", "--weights", weights, "--stdin"],
            Some(objects),
        ));
        out.push(case(
            &format!("reduce_{tag}"),
            &["reduce", "--weights", weights, "--stdin"],
            Some(&vectors),
        ));
        out.push(case(
            &format!("check_relations_{tag}"),
            &["check-relations", "--weights", weights, "--truncation", "2"],
            None,
        ));
    }
    out.push(case(
        "classify_flag",
        &["classify", "--weights", "2,2", "--vector", "d=2"],
        None,
    ));
    out.push(case(
        "pair_flag",
        &["pair", "--weights", "2,2", "--u", "d=1", "--v", "d=1"],
        None,
    ));
    out.push(case(
        "encode_json",
        &[
            "encode",
            "--weights",
            "2,3",
            "--object",
            "S[2,1]^-2",
            "--format",
            "json",
        ],
        None,
    ));
    out
}

pub fn run(c: &Case) -> (i32, Vec<u8>) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_wpl"))
        .args(&c.args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn wpl");
    let mut stdin = child.stdin.take().unwrap();
    stdin
        .write_all(c.stdin.as_deref().unwrap_or("").as_bytes())
        .unwrap();
    drop(stdin);
    let output = child.wait_with_output().unwrap();
    (output.status.code().unwrap_or(-1), output.stdout)
}

/// Names of cases whose output differs from the committed golden file.
pub fn mismatches() -> Vec<String> {
    let dir = golden_dir();
    cases()
        .into_iter()
        .filter(|c| {
            let (status, stdout) = run(c);
            let expected = std::fs::read(dir.join(format!("{}.out", c.name))).ok();
            status != c.status || expected.as_deref() != Some(stdout.as_slice())
        })
        .map(|c| c.name)
        .collect()
}
