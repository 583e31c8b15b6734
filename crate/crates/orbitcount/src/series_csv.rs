//! The `T,N` count table: header `T,N`, `T` in decimal with 6 significant
//! digits, integer `N`, LF line endings.

use std::io::{Read, Write};
use std::path::Path;

use orbitcount_core::powerfit::CountSeries;

use crate::error::{CliError, CliResult};

/// `T` with 6 significant digits in plain decimal notation.
pub fn format_t(t: f64) -> String {
    let mag = if t > 0.0 { t.log10().floor() as i32 } else { 0 };
    let decimals = (5 - mag).max(0) as usize;
    format!("{t:.decimals$}")
}

pub fn write_series(mut out: impl Write, series: &CountSeries) -> std::io::Result<()> {
    out.write_all(b"T,N\n")?;
    for (t, n) in series.points() {
        writeln!(out, "{},{n}", format_t(t))?;
    }
    out.flush()
}

pub fn to_string(series: &CountSeries) -> String {
    let mut buf = Vec::new();
    write_series(&mut buf, series).expect("writing to memory");
    String::from_utf8(buf).expect("ascii")
}

pub fn save(path: &Path, series: &CountSeries) -> CliResult<()> {
    let file = std::fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    write_series(std::io::BufWriter::new(file), series).map_err(|e| CliError::io(path, e))
}

/// Parse a `T,N` table. Any malformed content is an IO/parse error.
pub fn read_series(input: impl Read) -> Result<CountSeries, String> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let headers = reader.headers().map_err(|e| e.to_string())?;
    if headers.iter().map(str::trim).collect::<Vec<_>>() != ["T", "N"] {
        return Err(format!(
            "expected header `T,N`, found `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        ));
    }
    let (mut t, mut n) = (Vec::new(), Vec::new());
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        let row = i + 2;
        if rec.len() != 2 {
            return Err(format!("line {row}: expected 2 fields, found {}", rec.len()));
        }
        t.push(
            rec[0]
                .trim()
                .parse::<f64>()
                .map_err(|e| format!("line {row}: bad T `{}`: {e}", &rec[0]))?,
        );
        n.push(
            rec[1]
                .trim()
                .parse::<u64>()
                .map_err(|e| format!("line {row}: bad N `{}`: {e}", &rec[1]))?,
        );
    }
    CountSeries::new(t, n).map_err(|e| e.to_string())
}

pub fn load(path: &Path) -> CliResult<CountSeries> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    read_series(std::io::BufReader::new(file)).map_err(|e| CliError::io(path, e))
}
