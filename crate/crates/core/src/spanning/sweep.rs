use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{conjecture_matrix_with, determinant, EntrySource};
use crate::arith::Rational;
use crate::error::{Error, Result};

/// One line of a conjecture sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRecord {
    #[serde(rename = "D")]
    pub d: i64,
    pub ell: u32,
    pub det: Option<Rational>,
    pub nonzero: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub source: EntrySource,
    /// Record wall-clock milliseconds per `ℓ`. Off gives reproducible output.
    pub timing: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            source: EntrySource::Lifted,
            timing: true,
        }
    }
}

/// Computes the conjecture determinant for every even `ℓ` in
/// `ell_min..=ell_max` and hands each record to `sink` in increasing `ℓ`.
/// A failing `ℓ` yields a record carrying the error; the sweep goes on.
pub fn conjecture_sweep<F>(d: i64, ell_min: u32, ell_max: u32, opts: &SweepOptions, mut sink: F) -> Result<()>
where
    F: FnMut(SweepRecord) -> Result<()>,
{
    let start = if ell_min % 2 == 1 { ell_min + 1 } else { ell_min };
    for ell in (start..=ell_max).step_by(2) {
        let t0 = Instant::now();
        let det = conjecture_matrix_with(d, ell, opts.source).and_then(|m| determinant(&m));
        let ms = opts.timing.then(|| t0.elapsed().as_millis() as u64);
        let record = match det {
            Ok(det) => SweepRecord {
                d,
                ell,
                nonzero: !det.is_zero(),
                det: Some(det),
                ms,
                error: None,
            },
            Err(e) => SweepRecord {
                d,
                ell,
                det: None,
                nonzero: false,
                ms,
                error: Some(e.to_string()),
            },
        };
        sink(record)?;
    }
    Ok(())
}

/// Append-only JSONL sink with a side checkpoint holding the last completed `ℓ`.
pub struct JsonlSweepWriter {
    file: File,
    checkpoint: PathBuf,
}

impl JsonlSweepWriter {
    pub fn checkpoint_path(path: &Path) -> PathBuf {
        let mut p = path.as_os_str().to_owned();
        p.push(".checkpoint");
        PathBuf::from(p)
    }

    /// Opens `path` for writing. With `resume`, existing records are kept and
    /// the last completed `ℓ` is returned (from the checkpoint, or failing
    /// that the last parseable line).
    pub fn open(path: &Path, resume: bool) -> Result<(Self, Option<u32>)> {
        let checkpoint = Self::checkpoint_path(path);
        let mut last = None;
        if resume && path.exists() {
            last = fs::read_to_string(&checkpoint)
                .ok()
                .and_then(|s| s.trim().parse::<u32>().ok());
            if last.is_none() {
                last = last_record(path)?.map(|r| r.ell);
            }
        }
        let file = if resume {
            OpenOptions::new().create(true).append(true).open(path)?
        } else {
            File::create(path)?
        };
        if !resume {
            let _ = fs::remove_file(&checkpoint);
        }
        Ok((JsonlSweepWriter { file, checkpoint }, last))
    }

    pub fn write(&mut self, record: &SweepRecord) -> Result<()> {
        let line = serde_json::to_string(record).map_err(|e| Error::Io(e.to_string()))?;
        writeln!(self.file, "{line}")?;
        self.file.flush()?;
        let tmp = self.checkpoint.with_extension("checkpoint.tmp");
        fs::write(&tmp, format!("{}\n", record.ell))?;
        fs::rename(&tmp, &self.checkpoint)?;
        Ok(())
    }
}

fn last_record(path: &Path) -> Result<Option<SweepRecord>> {
    let reader = BufReader::new(File::open(path)?);
    let mut last = None;
    for line in reader.lines() {
        let line = line?;
        if let Ok(r) = serde_json::from_str::<SweepRecord>(&line) {
            last = Some(r);
        }
    }
    Ok(last)
}

/// Reads every record of a sweep file.
pub fn read_records(path: &Path) -> Result<Vec<SweepRecord>> {
    let reader = BufReader::new(File::open(path)?);
    reader
        .lines()
        .filter(|l| l.as_ref().map_or(true, |l| !l.trim().is_empty()))
        .map(|l| {
            let l = l?;
            serde_json::from_str(&l).map_err(|e| Error::Parse(e.to_string()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quiet() -> SweepOptions {
        SweepOptions {
            timing: false,
            ..Default::default()
        }
    }

    #[test]
    fn single_record() {
        let mut out = Vec::new();
        conjecture_sweep(1, 6, 6, &quiet(), |r| {
            out.push(r);
            Ok(())
        })
        .unwrap();
        assert_eq!(out.len(), 1);
        assert!(out[0].nonzero);
        assert_eq!(out[0].ell, 6);
    }

    #[test]
    fn failures_are_recorded() {
        let mut out = Vec::new();
        conjecture_sweep(-3, 6, 8, &quiet(), |r| {
            out.push(r);
            Ok(())
        })
        .unwrap();
        assert_eq!(out.len(), 2);
        assert!(out.iter().all(|r| r.error.is_some() && !r.nonzero && r.det.is_none()));
    }

    #[test]
    fn jsonl_resume() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sweep.jsonl");
        {
            let (mut w, last) = JsonlSweepWriter::open(&path, false).unwrap();
            assert_eq!(last, None);
            conjecture_sweep(1, 6, 10, &quiet(), |r| w.write(&r)).unwrap();
        }
        let (mut w, last) = JsonlSweepWriter::open(&path, true).unwrap();
        assert_eq!(last, Some(10));
        conjecture_sweep(1, last.unwrap() + 1, 14, &quiet(), |r| w.write(&r)).unwrap();
        let records = read_records(&path).unwrap();
        let ells: Vec<u32> = records.iter().map(|r| r.ell).collect();
        assert_eq!(ells, vec![6, 8, 10, 12, 14]);

        // Without the checkpoint the last line is used.
        fs::remove_file(JsonlSweepWriter::checkpoint_path(&path)).unwrap();
        let (_, last) = JsonlSweepWriter::open(&path, true).unwrap();
        assert_eq!(last, Some(14));
    }

    #[test]
    fn record_format() {
        let r = SweepRecord {
            d: 1,
            ell: 6,
            det: Some(Rational::new(-3, 7)),
            nonzero: true,
            ms: Some(12),
            error: None,
        };
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"D":1,"ell":6,"det":"-3/7","nonzero":true,"ms":12}"#
        );
    }
}
