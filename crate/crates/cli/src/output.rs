use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

pub fn sink(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(io::BufWriter::new(File::create(p)?)),
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_json<T: Serialize>(w: &mut dyn Write, report: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, report)?;
    writeln!(w)?;
    w.flush()
}

pub fn write_csv<R: Serialize>(w: &mut dyn Write, rows: impl IntoIterator<Item = R>) -> io::Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        wr.serialize(r).map_err(into_io)?;
    }
    wr.flush()
}

fn into_io(e: csv::Error) -> io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => io::Error::other(format!("{other:?}")),
    }
}

/// Rows for a flat `quantity,value` table.
#[derive(Serialize)]
pub struct Quantity {
    pub quantity: String,
    pub value: f64,
}

pub fn quantity(name: impl Into<String>, value: f64) -> Quantity {
    Quantity { quantity: name.into(), value }
}
