//! Text exchange format for formula files.
//!
//! Header keys appear in a fixed order, the body holds one `weight x1 .. xn`
//! line per point.  Coordinates are written with Rust's shortest
//! round-trip decimal encoding, so `parse(emit(f))` reproduces every value
//! bit-exactly and files diff cleanly.

use crate::formula::CubatureFormula;
use crate::measure::{Locus, MeasureSpec};
use crate::{Error, Result};
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

pub const FORMAT_VERSION: u32 = 1;

/// Serialized view of a formula plus bookkeeping that does not live on the
/// formula itself.
#[derive(Debug, Clone)]
pub struct FormulaFile {
    pub formula: CubatureFormula,
    pub certificate_summary: String,
    pub generator: String,
}

impl FormulaFile {
    pub fn emit(&self) -> String {
        let f = &self.formula;
        let mut out = String::new();
        let _ = writeln!(out, "cubature-formula {FORMAT_VERSION}");
        let _ = writeln!(out, "region {}", f.measure.region_tag());
        if let Some(r) = f.measure.shell_ratio() {
            let _ = writeln!(out, "shell-ratio {r}");
        }
        let _ = writeln!(out, "dim {}", f.dim());
        let _ = writeln!(out, "degree {}", f.degree);
        let _ = writeln!(out, "points {}", f.count());
        let _ = writeln!(out, "equal-weight {}", f.flags.equal_weight);
        let _ = writeln!(out, "positive {}", f.flags.positive);
        let _ = writeln!(out, "locus {}", locus_str(f.flags.locus));
        let _ = writeln!(out, "locus-general {}", locus_str(f.flags.locus_general));
        let _ = writeln!(out, "certificate {}", self.certificate_summary);
        let _ = writeln!(out, "generator {}", self.generator);
        let _ = writeln!(out, "begin-points");
        for i in 0..f.count() {
            let _ = write!(out, "{}", f.weight(i));
            for &x in f.point(i) {
                let _ = write!(out, " {x}");
            }
            out.push('\n');
        }
        out
    }

    /// Atomic write: temp file in the target directory, then rename.
    pub fn write_to(&self, path: &Path) -> Result<()> {
        let dir = path.parent().unwrap_or_else(|| Path::new("."));
        let mut tmp = dir.to_path_buf();
        let stem = path.file_name().and_then(|s| s.to_str()).unwrap_or("formula");
        tmp.push(format!(".{stem}.tmp"));
        {
            let mut w = std::io::BufWriter::new(std::fs::File::create(&tmp)?);
            w.write_all(self.emit().as_bytes())?;
            w.flush()?;
        }
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn parse(text: &str) -> Result<FormulaFile> {
        let mut lines = text.lines().enumerate();
        let mut header: Vec<(usize, String, String)> = Vec::new();
        let mut body_start = 0usize;
        for (ln, line) in lines.by_ref() {
            let line = line.trim_end();
            if line == "begin-points" {
                body_start = ln + 1;
                break;
            }
            let (key, value) = line.split_once(' ').ok_or(Error::Parse {
                line: ln + 1,
                message: "expected `key value`".into(),
            })?;
            header.push((ln + 1, key.to_string(), value.to_string()));
        }
        if body_start == 0 {
            return Err(Error::Parse { line: 1, message: "missing begin-points".into() });
        }
        let get = |key: &str| -> Result<(usize, String)> {
            header
                .iter()
                .find(|(_, k, _)| k == key)
                .map(|(ln, _, v)| (*ln, v.clone()))
                .ok_or(Error::Parse { line: 1, message: format!("missing header key {key}") })
        };
        let (ln, version) = get("cubature-formula")?;
        let version: u32 = version.parse().map_err(|_| Error::Parse {
            line: ln,
            message: "bad version".into(),
        })?;
        if version != FORMAT_VERSION {
            return Err(Error::Parse { line: ln, message: format!("unsupported version {version}") });
        }
        let (_, region) = get("region")?;
        let (ln_dim, dim) = get("dim")?;
        let dim: usize = dim
            .parse()
            .map_err(|_| Error::Parse { line: ln_dim, message: "bad dim".into() })?;
        let (ln_deg, degree) = get("degree")?;
        let degree: u32 = degree
            .parse()
            .map_err(|_| Error::Parse { line: ln_deg, message: "bad degree".into() })?;
        let (ln_pts, count) = get("points")?;
        let count: usize = count
            .parse()
            .map_err(|_| Error::Parse { line: ln_pts, message: "bad point count".into() })?;
        let shell_ratio = header
            .iter()
            .find(|(_, k, _)| k == "shell-ratio")
            .map(|(ln, _, v)| {
                v.parse::<f64>()
                    .map_err(|_| Error::Parse { line: *ln, message: "bad shell ratio".into() })
            })
            .transpose()?;
        let measure = measure_from_tag(&region, dim, shell_ratio)?;
        let certificate_summary = get("certificate").map(|(_, v)| v).unwrap_or_default();
        let generator = get("generator").map(|(_, v)| v).unwrap_or_default();

        let mut points = Vec::with_capacity(count * dim);
        let mut weights = Vec::with_capacity(count);
        let mut body_lines = 0usize;
        for (ln, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            body_lines += 1;
            let mut vals = line.split_ascii_whitespace();
            let w: f64 = vals
                .next()
                .ok_or(Error::Parse { line: ln + 1, message: "empty point line".into() })?
                .parse()
                .map_err(|_| Error::Parse { line: ln + 1, message: "bad weight".into() })?;
            weights.push(w);
            let mut got = 0usize;
            for v in vals {
                let x: f64 = v.parse().map_err(|_| Error::Parse {
                    line: ln + 1,
                    message: format!("bad coordinate `{v}`"),
                })?;
                points.push(x);
                got += 1;
            }
            if got != dim {
                return Err(Error::Parse {
                    line: ln + 1,
                    message: format!("expected {dim} coordinates, found {got}"),
                });
            }
        }
        if body_lines != count {
            return Err(Error::Parse {
                line: body_start,
                message: format!("declared {count} points, found {body_lines} lines"),
            });
        }
        let formula = CubatureFormula::new(measure, points, weights, degree)?;
        Ok(FormulaFile { formula, certificate_summary, generator })
    }

    pub fn read_from(path: &Path) -> Result<FormulaFile> {
        let text = std::fs::read_to_string(path)?;
        FormulaFile::parse(&text)
    }
}

fn locus_str(l: Locus) -> &'static str {
    match l {
        Locus::Interior => "interior",
        Locus::Boundary => "boundary",
        Locus::Exterior => "exterior",
    }
}

pub fn measure_from_tag(tag: &str, dim: usize, shell_ratio: Option<f64>) -> Result<MeasureSpec> {
    let need_r = || {
        shell_ratio.ok_or_else(|| {
            Error::InvalidParameter(format!("region `{tag}` needs a shell ratio"))
        })
    };
    let m = match tag {
        "cube" => MeasureSpec::Cube { n: dim },
        "cubical-shell" => MeasureSpec::CubicalShell { n: dim, r: need_r()? },
        "gaussian" => MeasureSpec::Gaussian { n: dim },
        "sphere" => MeasureSpec::Sphere { n: dim },
        "ball" => MeasureSpec::Ball { n: dim },
        "spherical-shell" => MeasureSpec::SphericalShell { n: dim, r: need_r()? },
        "simplex" => MeasureSpec::Simplex { coords: dim },
        "cross-polytope" => MeasureSpec::CrossPolytope { n: dim },
        "exponential-orthant" => MeasureSpec::ExponentialOrthant { n: dim },
        "radial-exponential" => MeasureSpec::RadialExponential { n: dim },
        _ => return Err(Error::InvalidParameter(format!("unknown region `{tag}`"))),
    };
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build::{build_cube, BuildOptions};

    #[test]
    fn roundtrip_is_bit_exact() {
        let f = build_cube(3, 3, &BuildOptions::default()).unwrap();
        let file = FormulaFile {
            formula: f,
            certificate_summary: "exhaustive checked=20 maxdev=1e-16 tol=1e-10 pass=true".into(),
            generator: "cube n=3 t=3".into(),
        };
        let text = file.emit();
        let back = FormulaFile::parse(&text).unwrap();
        assert_eq!(back.formula.count(), file.formula.count());
        assert_eq!(back.formula.points_flat(), file.formula.points_flat());
        assert_eq!(back.formula.weights(), file.formula.weights());
        // and emitting again is byte-identical
        assert_eq!(back.emit(), text);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "cubature-formula 1\nregion cube\ndim 2\ndegree 1\npoints 1\nequal-weight true\npositive true\nlocus interior\nlocus-general interior\ncertificate none\ngenerator test\nbegin-points\n0.5 0.1\n";
        // 1 coordinate instead of 2
        let err = FormulaFile::parse(text).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 13),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn count_mismatch_detected() {
        let f = build_cube(2, 1, &BuildOptions::default()).unwrap();
        let file =
            FormulaFile { formula: f, certificate_summary: "none".into(), generator: "g".into() };
        let mut text = file.emit();
        text.push_str("0.25 0.0 0.0\n");
        assert!(FormulaFile::parse(&text).is_err());
    }
}
