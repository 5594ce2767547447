//! Seeded synthetic datasets for the benchmark suite.

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use cognate::lang::PlainTerm;
use cognate::session::dataset::{list, record};
use cognate::session::Dataset;

use crate::Failure;

/// How to produce one dataset.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "generator", rename_all = "lowercase", deny_unknown_fields)]
pub enum Source {
    /// Rows of `{source, co2e}` with values in 10..100 to two places.
    Series { rows: usize, seed: u64 },
    /// A list of `rows` lists of integer pixels in `0..=max`.
    Matrix {
        rows: usize,
        cols: usize,
        seed: u64,
        #[serde(default = "default_max")]
        max: i64,
    },
    /// `{country, year, output, capacity}` for each country and year.
    Energy {
        countries: usize,
        from: i64,
        to: i64,
        seed: u64,
    },
    /// A CSV or JSON file, relative to the suite file.
    File { path: PathBuf },
}

fn default_max() -> i64 {
    255
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

pub fn series(rows: usize, seed: u64) -> PlainTerm {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    list(
        (0..rows)
            .map(|i| {
                record(vec![
                    ("source".into(), PlainTerm::Str(format!("S{i}"))),
                    (
                        "co2e".into(),
                        PlainTerm::Float(round2(rng.gen_range(10.0..100.0))),
                    ),
                ])
            })
            .collect(),
    )
}

pub fn matrix(rows: usize, cols: usize, seed: u64, max: i64) -> PlainTerm {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    list(
        (0..rows)
            .map(|_| {
                list(
                    (0..cols)
                        .map(|_| PlainTerm::Int(rng.gen_range(0..=max)))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn country_code(i: usize) -> String {
    let a = (b'A' + (i / 26 % 26) as u8) as char;
    let b = (b'A' + (i % 26) as u8) as char;
    format!("{a}{b}")
}

pub fn energy(countries: usize, from: i64, to: i64, seed: u64) -> PlainTerm {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for year in from..=to {
        for c in 0..countries {
            let capacity = round2(rng.gen_range(1.0..50.0));
            let output = round2(capacity * 8.76 * rng.gen_range(0.2..0.9));
            rows.push(record(vec![
                ("country".into(), PlainTerm::Str(country_code(c))),
                ("year".into(), PlainTerm::Int(year)),
                ("output".into(), PlainTerm::Float(output)),
                ("capacity".into(), PlainTerm::Float(capacity)),
            ]));
        }
    }
    list(rows)
}

impl Source {
    /// Builds the dataset; file paths are taken relative to `base`.
    pub fn dataset(&self, name: &str, base: &Path) -> Result<Dataset, Failure> {
        let value = match self {
            Source::Series { rows, seed } => series(*rows, *seed),
            Source::Matrix {
                rows,
                cols,
                seed,
                max,
            } => matrix(*rows, *cols, *seed, *max),
            Source::Energy {
                countries,
                from,
                to,
                seed,
            } => energy(*countries, *from, *to, *seed),
            Source::File { path } => {
                let p = base.join(path);
                return Dataset::load(name, &p)
                    .map_err(|e| Failure::missing(format!("{}: {e}", p.display())));
            }
        };
        Ok(Dataset::new(name, value))
    }
}
