//! File ingestion. Every loader prefixes its error with the offending path.

use std::path::Path;

use specset::blaschke::BlaschkeProduct;
use specset::geometry::{Domain, GeneralizedDisk};
use specset::io;
use specset::matcalc::{ComplexMatrix, ScalarRational};
use specset::{Error, Result};

fn load<T>(path: &Path, parse: fn(&str) -> Result<T>) -> Result<T> {
    let text = io::read_to_string(path)?;
    parse(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => Error::Parse(format!("{}: {other}", path.display())),
    })
}

pub fn matrix(path: &Path) -> Result<ComplexMatrix> {
    load(path, io::parse_matrix)
}

pub fn domain(path: &Path) -> Result<Domain> {
    load(path, io::parse_domain)
}

pub fn disk(path: &Path) -> Result<GeneralizedDisk> {
    load(path, io::parse_disk)
}

pub fn blaschke(path: &Path) -> Result<BlaschkeProduct> {
    load(path, io::parse_blaschke)
}

pub fn rational(path: &Path) -> Result<ScalarRational> {
    load(path, io::parse_rational)
}
