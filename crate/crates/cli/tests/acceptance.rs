//! Acceptance run: executes `verify --suite all --seed 0`, prints one line
//! per criterion, then repeats the run with a different worker count and
//! requires byte-identical CSV bodies.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

const CRITERIA: u32 = 15;

fn run_verify(out: &Path) -> i32 {
    bpl_cli::run(["bpl", "verify", "--suite", "all", "--seed", "0", "--output", out.to_str().expect("utf-8 path")])
}

/// Everything but the leading config line, which records the output path.
fn body(text: &str) -> String {
    text.lines().filter(|l| !l.starts_with("# config ")).collect::<Vec<_>>().join("\n")
}

fn main() -> ExitCode {
    let dir = std::env::temp_dir().join(format!("bpl-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let (first, second) = (dir.join("run1.csv"), dir.join("run2.csv"));

    let start = Instant::now();
    let code = run_verify(&first);
    let text = std::fs::read_to_string(&first).unwrap_or_default();
    println!("verify --suite all --seed 0: exit {code} in {:.1}s", start.elapsed().as_secs_f64());

    // criterion -> (passed checks, failed checks, first failure)
    let mut status: BTreeMap<u32, (usize, usize, String)> = BTreeMap::new();
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    for record in reader.records() {
        let Ok(r) = record else { continue };
        let Ok(c) = r[1].parse::<u32>() else { continue };
        let entry = status.entry(c).or_default();
        if &r[5] == "pass" {
            entry.0 += 1;
        } else {
            entry.1 += 1;
            if entry.2.is_empty() {
                entry.2 = format!("{} (observed {}, bound {})", &r[2], &r[3], &r[4]);
            }
        }
    }

    std::env::set_var("BPL_THREADS", "2");
    let start = Instant::now();
    let code2 = run_verify(&second);
    std::env::remove_var("BPL_THREADS");
    let text2 = std::fs::read_to_string(&second).unwrap_or_default();
    let identical = code2 == code && !text.is_empty() && body(&text) == body(&text2);
    println!("repeat with BPL_THREADS=2: exit {code2} in {:.1}s", start.elapsed().as_secs_f64());

    let mut failed = 0;
    for c in 1..CRITERIA {
        let line = match status.get(&c) {
            Some((p, 0, _)) => format!("PASS criterion {c:2}: {p} checks"),
            Some((p, f, why)) => {
                failed += 1;
                format!("FAIL criterion {c:2}: {f} of {} checks failed; first: {why}", p + f)
            }
            None => {
                failed += 1;
                format!("FAIL criterion {c:2}: no checks reported")
            }
        };
        println!("{line}");
    }
    if identical {
        println!("PASS criterion 15: byte-identical CSV bodies across runs and worker counts");
    } else {
        failed += 1;
        println!("FAIL criterion 15: CSV bodies differ between runs");
    }
    if code != 0 {
        println!("verify exit code {code} (expected 0)");
    }
    let _ = std::fs::remove_dir_all(&dir);
    println!("{} of {CRITERIA} criteria passed", CRITERIA as usize - failed);
    if failed == 0 && code == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
