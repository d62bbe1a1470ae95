use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use chrono::{SecondsFormat, Utc};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::write_snapshot;
use crate::optimizer::{run_search, DescentConfig, SearchOutcome};

use super::output::{emit_tables, emit_trace, record_rows, render_latex, snapshot_path};
use super::SeedRange;

/// A resolved command line.
#[derive(Debug, Clone, PartialEq)]
pub struct Campaign {
    /// `config.seed` is ignored in favour of `seeds`.
    pub config: DescentConfig,
    pub seeds: SeedRange,
    pub out_dir: PathBuf,
    pub latex: bool,
    pub print_trace: bool,
}

/// manifest.json. Passing it back through `--config` repeats the campaign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: DescentConfig,
    pub seeds: SeedRange,
    pub tool_version: String,
    pub started_at: String,
    pub finished_at: String,
    pub record_count: usize,
    pub verified_count: usize,
}

fn ensure_parent(path: &Path) -> Result<()> {
    match path.parent() {
        Some(parent) => fs::create_dir_all(parent).map_err(|e| Error::io(parent, e)),
        None => Ok(()),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    ensure_parent(path)?;
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn finish(mut w: BufWriter<File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

fn trace_path(seeds: &SeedRange, seed: u64) -> String {
    if seeds.is_single() {
        "trace.csv".into()
    } else {
        format!("seed-{seed}/trace.csv")
    }
}

fn write_outputs(
    dir: &Path,
    campaign: &Campaign,
    outcomes: &[(u64, SearchOutcome)],
    manifest: &RunManifest,
) -> Result<()> {
    let mut records = Vec::new();
    for (seed, out) in outcomes {
        let path = dir.join(trace_path(&campaign.seeds, *seed));
        let mut w = create(&path)?;
        emit_trace(&out.trace, &mut w)?;
        finish(w, &path)?;
        for r in &out.records {
            let path = dir.join(snapshot_path(r.seed, r.iteration));
            ensure_parent(&path)?;
            write_snapshot(&r.field_snapshot, &path)?;
        }
        records.extend(out.records.iter().cloned());
    }
    let rows = record_rows(&records);
    let (csv_path, json_path) = (dir.join("records.csv"), dir.join("records.json"));
    let (mut c, mut j) = (create(&csv_path)?, create(&json_path)?);
    emit_tables(&rows, &mut c, &mut j)?;
    finish(c, &csv_path)?;
    finish(j, &json_path)?;
    if campaign.latex {
        let path = dir.join("records.tex");
        let mut w = create(&path)?;
        w.write_all(render_latex(&rows).as_bytes())
            .map_err(|e| Error::io(&path, e))?;
        finish(w, &path)?;
    }
    let path = dir.join("manifest.json");
    let mut w = create(&path)?;
    serde_json::to_writer_pretty(&mut w, manifest)?;
    finish(w, &path)
}

/// Moves every entry of `staged` into `out`, replacing same-named entries.
fn publish(staged: &Path, out: &Path) -> Result<()> {
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    for entry in fs::read_dir(staged).map_err(|e| Error::io(staged, e))? {
        let entry = entry.map_err(|e| Error::io(staged, e))?;
        let target = out.join(entry.file_name());
        if target.is_dir() {
            fs::remove_dir_all(&target).map_err(|e| Error::io(&target, e))?;
        } else if target.exists() {
            fs::remove_file(&target).map_err(|e| Error::io(&target, e))?;
        }
        fs::rename(entry.path(), &target).map_err(|e| Error::io(&target, e))?;
    }
    Ok(())
}

/// Runs one search per seed, in parallel, and writes the results under
/// `campaign.out_dir`.
///
/// Everything is written to a staging directory next to the output and only
/// moved into place once complete, so a failed run leaves nothing behind.
pub fn run_campaign(campaign: &Campaign) -> Result<RunManifest> {
    let started_at = Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true);
    let seeds: Vec<u64> = campaign.seeds.iter().collect();
    let outcomes = seeds
        .par_iter()
        .map(|&seed| {
            let cfg = DescentConfig {
                seed,
                ..campaign.config.clone()
            };
            run_search(&cfg).map(|out| (seed, out))
        })
        .collect::<Result<Vec<_>>>()?;

    let records: Vec<_> = outcomes.iter().flat_map(|(_, o)| &o.records).collect();
    let manifest = RunManifest {
        config: DescentConfig {
            seed: campaign.seeds.first,
            ..campaign.config.clone()
        },
        seeds: campaign.seeds,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        started_at,
        finished_at: Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true),
        record_count: records.len(),
        verified_count: records.iter().filter(|r| r.verified).count(),
    };

    let out = &campaign.out_dir;
    let parent = match out.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&parent).map_err(|e| Error::io(&parent, e))?;
    let staging = tempfile::Builder::new()
        .prefix(".qclab-staging-")
        .tempdir_in(&parent)
        .map_err(|e| Error::io(&parent, e))?;
    write_outputs(staging.path(), campaign, &outcomes, &manifest)?;
    publish(staging.path(), out)?;

    if campaign.print_trace {
        println!("seed,iteration,gamma,j_value,tau");
        for (seed, o) in &outcomes {
            for r in &o.trace.rows {
                println!("{seed},{},{},{},{}", r.iteration, r.gamma, r.j_value, r.tau);
            }
        }
    }
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;

    fn tiny(out_dir: PathBuf, seeds: SeedRange) -> Campaign {
        Campaign {
            config: DescentConfig {
                grid: GridSpec::new(4).unwrap(),
                gamma_start: 2.3,
                gamma_end: 2.28,
                gamma_step: 0.01,
                max_iters_per_gamma: 3,
                ..Default::default()
            },
            seeds,
            out_dir,
            latex: true,
            print_trace: false,
        }
    }

    #[test]
    fn single_seed_layout() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("run");
        let m = run_campaign(&tiny(out.clone(), SeedRange::single(5))).unwrap();
        for f in [
            "records.csv",
            "records.json",
            "records.tex",
            "trace.csv",
            "manifest.json",
        ] {
            assert!(out.join(f).is_file(), "{f}");
        }
        assert_eq!(
            fs::read_to_string(out.join("trace.csv"))
                .unwrap()
                .lines()
                .count(),
            7
        );
        let back: RunManifest =
            serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.config.seed, 5);
        // the staging directory is gone
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn sweeps_scope_traces_by_seed_and_overwrite_previous_runs() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("sweep");
        fs::create_dir_all(&out).unwrap();
        fs::write(out.join("records.csv"), "stale").unwrap();
        run_campaign(&tiny(out.clone(), SeedRange { first: 0, last: 2 })).unwrap();
        for s in 0..=2 {
            assert!(out.join(format!("seed-{s}/trace.csv")).is_file());
        }
        assert!(!out.join("trace.csv").exists());
        assert!(fs::read_to_string(out.join("records.csv"))
            .unwrap()
            .starts_with("seed,"));
    }

    #[test]
    fn unwritable_output_fails_without_leftovers() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        fs::write(&blocker, "x").unwrap();
        let err = run_campaign(&tiny(blocker.join("run"), SeedRange::single(0))).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
        let names: Vec<_> = fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .collect();
        assert_eq!(names, ["file"]);
    }
}
