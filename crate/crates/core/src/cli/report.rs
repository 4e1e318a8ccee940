use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Info,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Info => "info",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Fail => 1,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Machine,
}

/// Outcome of one verb: human-readable body lines, located findings and a
/// flat key/value summary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub verb: &'static str,
    pub status: Status,
    pub lines: Vec<String>,
    pub findings: Vec<String>,
    pub machine: Vec<(String, String)>,
}

impl Report {
    pub fn new(verb: &'static str) -> Self {
        Report {
            verb,
            status: Status::Info,
            lines: Vec::new(),
            findings: Vec::new(),
            machine: Vec::new(),
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn finding(&mut self, s: impl Into<String>) {
        self.findings.push(s.into());
    }

    pub fn kv(&mut self, key: &str, value: impl ToString) {
        self.machine.push((key.to_string(), value.to_string()));
    }

    /// `Pass` when there are no findings, `Fail` otherwise.
    pub fn settle(&mut self) {
        self.status = if self.findings.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        };
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Text => {
                for l in &self.lines {
                    let _ = writeln!(out, "{l}");
                }
                for f in &self.findings {
                    let _ = writeln!(out, "finding: {f}");
                }
                let _ = writeln!(out, "status: {}", self.status.as_str());
            }
            Format::Machine => {
                let _ = writeln!(out, "verb={}", self.verb);
                let _ = writeln!(out, "status={}", self.status.as_str());
                for (k, v) in &self.machine {
                    let _ = writeln!(out, "{k}={v}");
                }
                let _ = writeln!(out, "findings={}", self.findings.len());
                for (i, f) in self.findings.iter().enumerate() {
                    let _ = writeln!(out, "finding.{i}={f}");
                }
            }
        }
        out
    }
}

/// Twelve significant digits, fixed-point for moderate magnitudes.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.11e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_twelve_digits() {
        assert_eq!(format_float(std::f64::consts::E), "2.71828182846");
        assert_eq!(format_float(-0.25), "-0.250000000000");
        assert_eq!(format_float(1234.5), "1234.50000000");
        assert_eq!(format_float(1e-9), "1.00000000000e-9");
    }

    #[test]
    fn machine_block() {
        let mut r = Report::new("x");
        r.kv("count", 3);
        r.finding("bad");
        r.settle();
        assert_eq!(
            r.render(Format::Machine),
            "verb=x\nstatus=fail\ncount=3\nfindings=1\nfinding.0=bad\n"
        );
        assert_eq!(r.status.exit_code(), 1);
    }
}
