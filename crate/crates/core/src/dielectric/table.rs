use num_complex::Complex64;

use super::{ComplexPermittivity, DielectricModel};
use crate::constants::{ev_to_rad_per_s, rad_per_s_to_ev};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalRow {
    /// Photon energy, eV.
    pub energy_ev: f64,
    pub n: f64,
    pub k: f64,
}

impl OpticalRow {
    /// Im ε = 2nk.
    pub fn im_eps(&self) -> f64 {
        2.0 * self.n * self.k
    }
}

/// Optical constants `(n, k)` sampled at strictly increasing photon energies.
#[derive(Debug, Clone, PartialEq)]
pub struct OpticalDataTable {
    rows: Vec<OpticalRow>,
    // ln of the angular frequency of each row, for interpolation
    log_omega: Vec<f64>,
}

impl OpticalDataTable {
    pub fn from_rows(rows: Vec<OpticalRow>) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::TooFewRows(rows.len()));
        }
        for (i, r) in rows.iter().enumerate() {
            if !(r.energy_ev > 0.0 && r.energy_ev.is_finite()) {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("photon energy must be positive, got {}", r.energy_ev),
                });
            }
            if !(r.n >= 0.0 && r.k >= 0.0 && r.n.is_finite() && r.k.is_finite()) {
                return Err(Error::Parse {
                    line: i + 1,
                    message: "n and k must be finite and non-negative".into(),
                });
            }
        }
        for (i, w) in rows.windows(2).enumerate() {
            if !(w[1].energy_ev > w[0].energy_ev) {
                return Err(Error::NotMonotonic { line: i + 2 });
            }
        }
        let log_omega = rows
            .iter()
            .map(|r| ev_to_rad_per_s(r.energy_ev).ln())
            .collect();
        Ok(OpticalDataTable { rows, log_omega })
    }

    pub fn rows(&self) -> &[OpticalRow] {
        &self.rows
    }

    pub fn min_omega(&self) -> f64 {
        ev_to_rad_per_s(self.rows[0].energy_ev)
    }

    pub fn max_omega(&self) -> f64 {
        ev_to_rad_per_s(self.rows[self.rows.len() - 1].energy_ev)
    }

    pub(crate) fn log_omega_nodes(&self) -> &[f64] {
        &self.log_omega
    }

    /// Interpolated `(n, k)` at ω inside the table range.
    ///
    /// Log-log linear in each of n and k; a quantity that is zero at either
    /// end of the interval is interpolated linearly in ln ω instead.
    pub fn nk_at(&self, omega: f64) -> (f64, f64) {
        let x = omega.ln();
        let nodes = &self.log_omega;
        let last = nodes.len() - 1;
        let i = match nodes.binary_search_by(|v| v.total_cmp(&x)) {
            Ok(i) => return (self.rows[i].n, self.rows[i].k),
            Err(0) => 0,
            Err(i) if i > last => last - 1,
            Err(i) => i - 1,
        };
        let s = (x - nodes[i]) / (nodes[i + 1] - nodes[i]);
        let (a, b) = (&self.rows[i], &self.rows[i + 1]);
        (interp(a.n, b.n, s), interp(a.k, b.k, s))
    }

    pub fn permittivity_at(&self, omega: f64) -> ComplexPermittivity {
        let (n, k) = self.nk_at(omega);
        ComplexPermittivity::new(n * n - k * k, 2.0 * n * k)
    }

    /// Im ε(ω) inside the table range.
    pub fn im_eps_at(&self, omega: f64) -> f64 {
        let (n, k) = self.nk_at(omega);
        2.0 * n * k
    }

    /// Writes the table in the three-column text format.
    pub fn to_text(&self) -> String {
        let mut s = String::from("# photon_energy_eV  n  k\n");
        for r in &self.rows {
            s.push_str(&format!("{:.12e} {:.12e} {:.12e}\n", r.energy_ev, r.n, r.k));
        }
        s
    }
}

fn interp(a: f64, b: f64, s: f64) -> f64 {
    if a > 0.0 && b > 0.0 {
        (a.ln() + s * (b.ln() - a.ln())).exp()
    } else {
        a + s * (b - a)
    }
}

/// Parses whitespace-separated `energy_eV n k` rows. Blank lines and lines
/// starting with `#` are skipped.
pub fn ingest_optical_table(text: &str) -> Result<OpticalDataTable> {
    let mut rows = Vec::new();
    let mut lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 3 columns, found {}", fields.len()),
            });
        }
        let mut vals = [0.0; 3];
        for (v, f) in vals.iter_mut().zip(&fields) {
            *v = f.parse::<f64>().map_err(|e| Error::Parse {
                line: line_no,
                message: format!("{f:?}: {e}"),
            })?;
        }
        rows.push(OpticalRow {
            energy_ev: vals[0],
            n: vals[1],
            k: vals[2],
        });
        lines.push(line_no);
    }
    // Re-map row indices in errors to file line numbers.
    OpticalDataTable::from_rows(rows).map_err(|e| match e {
        Error::NotMonotonic { line } => Error::NotMonotonic {
            line: lines[line - 1],
        },
        Error::Parse { line, message } => Error::Parse {
            line: lines[line - 1],
            message,
        },
        other => other,
    })
}

/// Samples `model` at `points` log-spaced photon energies in
/// `[e_min_ev, e_max_ev]` and returns the `(n, k)` table.
pub fn synthesize_table(
    model: &DielectricModel,
    e_min_ev: f64,
    e_max_ev: f64,
    points: usize,
) -> Result<OpticalDataTable> {
    if points < 2 || !(e_min_ev > 0.0 && e_max_ev > e_min_ev) {
        return Err(Error::Domain("need points ≥ 2 and 0 < e_min < e_max".into()));
    }
    let ratio = (e_max_ev / e_min_ev).ln();
    let rows = (0..points)
        .map(|i| {
            let e = e_min_ev * (ratio * i as f64 / (points - 1) as f64).exp();
            let eps: Complex64 = model.eps_real_axis(ev_to_rad_per_s(e))?.into();
            let mut nk = eps.sqrt();
            if nk.im < 0.0 {
                nk = -nk;
            }
            Ok(OpticalRow {
                energy_ev: rad_per_s_to_ev(ev_to_rad_per_s(e)),
                n: nk.re.max(0.0),
                k: nk.im.max(0.0),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    OpticalDataTable::from_rows(rows)
}
