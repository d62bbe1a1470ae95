// A small seed sweep through the campaign driver, the same code path as the
// qclab binary. Outputs land in a temporary directory that is listed and
// then removed.

use qclab::cli::{parse_campaign, run_campaign};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let out = dir.path().join("sweep");
    let out_flag = format!("--out={}", out.display());
    let campaign = parse_campaign([
        "qclab",
        "--mesh-n",
        "8",
        "--xi-mode",
        "random",
        "--phi0",
        "p1",
        "--seeds",
        "0..3",
        "--gamma-end",
        "2.25",
        "--max-iters",
        "20",
        "--latex",
        &out_flag,
    ])?;
    let manifest = run_campaign(&campaign)?;
    println!(
        "{} record(s), {} verified",
        manifest.record_count, manifest.verified_count
    );

    let mut names: Vec<String> = walk(&out)?;
    names.sort();
    for name in names {
        println!("  {name}");
    }
    print!("{}", std::fs::read_to_string(out.join("records.csv"))?);
    Ok(())
}

fn walk(dir: &std::path::Path) -> std::io::Result<Vec<String>> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_dir() {
            let prefix = path.file_name().unwrap().to_string_lossy().to_string();
            out.extend(walk(&path)?.into_iter().map(|n| format!("{prefix}/{n}")));
        } else {
            out.push(path.file_name().unwrap().to_string_lossy().to_string());
        }
    }
    Ok(out)
}
