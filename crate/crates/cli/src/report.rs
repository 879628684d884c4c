//! Output discipline: machine mode is flat `key=value` lines with fixed
//! float formatting so identical runs are byte-identical; human mode aligns
//! the same fields for reading.

use std::fmt::Display;

pub struct Report {
    machine: bool,
    lines: Vec<String>,
}

impl Report {
    pub fn new(machine: bool) -> Self {
        Self {
            machine,
            lines: Vec::new(),
        }
    }

    pub fn kv(&mut self, key: &str, value: impl Display) {
        if self.machine {
            self.lines.push(format!("{key}={value}"));
        } else {
            self.lines.push(format!("{key:<28} {value}"));
        }
    }

    pub fn kv_f64(&mut self, key: &str, value: f64) {
        if self.machine {
            self.lines.push(format!("{key}={value:.12e}"));
        } else {
            self.lines.push(format!("{key:<28} {value:.9}"));
        }
    }

    /// Pre-formatted line (CSV rows); identical in both modes.
    pub fn raw(&mut self, line: &str) {
        self.lines.push(line.to_string());
    }

    pub fn flush(&mut self) {
        for line in self.lines.drain(..) {
            println!("{line}");
        }
    }
}
