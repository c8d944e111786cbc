//! Record and grid emission: JSON lines by default, CSV tables on request.
//! Records are deterministic for a fixed config and seed except the trailing
//! wall_ms field, which CSV omits entirely.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Serialize, Clone, Debug)]
pub struct Assertion {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

impl Assertion {
    pub fn le(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self { name: name.into(), value, bound, pass: value <= bound }
    }

    pub fn ge(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self { name: name.into(), value, bound, pass: value >= bound }
    }

    pub fn dims(name: impl Into<String>, got: usize, want: usize) -> Self {
        Self { name: name.into(), value: got as f64, bound: want as f64, pass: got == want }
    }

    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self { name: name.into(), value: if ok { 1.0 } else { 0.0 }, bound: 1.0, pass: ok }
    }
}

#[derive(Serialize, Debug)]
pub struct ResultRecord {
    pub command: &'static str,
    pub name: String,
    pub inputs: Value,
    pub outputs: Value,
    pub assertions: Vec<Assertion>,
    pub wall_ms: f64,
}

impl ResultRecord {
    pub fn new(command: &'static str, name: impl Into<String>, inputs: Value) -> Self {
        Self {
            command,
            name: name.into(),
            inputs,
            outputs: json!({}),
            assertions: Vec::new(),
            wall_ms: 0.0,
        }
    }

    pub fn output(mut self, key: &str, value: Value) -> Self {
        self.outputs[key] = value;
        self
    }

    pub fn assert(mut self, a: Assertion) -> Self {
        self.assertions.push(a);
        self
    }
}

pub fn cpx(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub struct Emitter {
    out: BufWriter<Box<dyn Write>>,
    csv: bool,
    csv_assert_header: bool,
    failed: bool,
    clock: Instant,
}

impl Emitter {
    pub fn new(path: Option<&Path>, csv: bool) -> io::Result<Self> {
        let sink: Box<dyn Write> = match path {
            Some(p) => Box::new(File::create(p)?),
            None => Box::new(io::stdout()),
        };
        Ok(Self {
            out: BufWriter::new(sink),
            csv,
            csv_assert_header: false,
            failed: false,
            clock: Instant::now(),
        })
    }

    pub fn any_failed(&self) -> bool {
        self.failed
    }

    pub fn record(&mut self, mut rec: ResultRecord) -> io::Result<()> {
        rec.wall_ms = self.clock.elapsed().as_secs_f64() * 1e3;
        self.clock = Instant::now();
        self.failed |= rec.assertions.iter().any(|a| !a.pass);
        if self.csv {
            if !self.csv_assert_header {
                writeln!(self.out, "command,record,assertion,value,bound,pass")?;
                self.csv_assert_header = true;
            }
            for a in &rec.assertions {
                writeln!(
                    self.out,
                    "{},{},{},{:.12e},{:.12e},{}",
                    rec.command, rec.name, a.name, a.value, a.bound, a.pass
                )?;
            }
        } else {
            let line = serde_json::to_string(&rec)
                .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
            writeln!(self.out, "{line}")?;
        }
        Ok(())
    }

    pub fn grid_header(
        &mut self,
        command: &'static str,
        grid: &str,
        columns: &[&str],
    ) -> io::Result<()> {
        if self.csv {
            writeln!(self.out)?;
            writeln!(self.out, "{}", columns.join(","))?;
        } else {
            let head = json!({"command": command, "grid": grid, "columns": columns});
            writeln!(self.out, "{head}")?;
        }
        Ok(())
    }

    pub fn grid_row(&mut self, grid: &str, values: &[f64]) -> io::Result<()> {
        if self.csv {
            let cells: Vec<String> = values.iter().map(|v| format!("{v:.12e}")).collect();
            writeln!(self.out, "{}", cells.join(","))?;
        } else {
            let row = json!({"grid": grid, "row": values});
            writeln!(self.out, "{row}")?;
        }
        Ok(())
    }

    pub fn finish(&mut self) -> io::Result<()> {
        self.out.flush()
    }
}
