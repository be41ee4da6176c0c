//! Drives the command line in-process, as `qles resources --out <dir>` would.

fn main() {
    let out = std::env::temp_dir().join("qles-example-resources");
    let code = qles_measure::cli::run(["qles", "resources", "--out", out.to_str().unwrap()]);
    println!("exit code {code}; wrote {}", out.display());
    for entry in std::fs::read_dir(&out).unwrap() {
        println!("  {}", entry.unwrap().file_name().to_string_lossy());
    }
}
