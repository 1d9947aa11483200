use crate::error::{Error, Result};

/// Stopping rule for adaptive series: stop after three consecutive terms
/// whose estimated tail, `t r / (1 - r)` with `r` the ratio to the previous
/// term, is no larger than `rel_tol` times the running partial sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            rel_tol: 1e-12,
            max_terms: 1_000_000,
        }
    }
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        let ctl = SeriesControl { rel_tol, max_terms };
        ctl.validate()?;
        Ok(ctl)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "series rel_tol must be positive, got {}",
                self.rel_tol
            )));
        }
        if self.max_terms < 10 {
            return Err(Error::InvalidParameter(format!(
                "series max_terms must be >= 10, got {}",
                self.max_terms
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    pub terms: usize,
}

const SMALL_RUN: usize = 3;

/// Sums `term(0) + term(1) + ...` until the stopping rule fires.
pub fn sum_adaptive<F>(term: F, ctl: &SeriesControl) -> Result<SeriesSum>
where
    F: FnMut(usize) -> f64,
{
    let terms = sum_adaptive_terms(term, |t| *t, ctl)?;
    Ok(SeriesSum {
        value: terms.iter().sum(),
        terms: terms.len(),
    })
}

/// Generic form: collects the accepted terms so callers can take several
/// moments over exactly the same truncation. `size` gives the magnitude the
/// stopping rule compares against the running sum of magnitudes.
pub fn sum_adaptive_terms<T, F, S>(mut term: F, size: S, ctl: &SeriesControl) -> Result<Vec<T>>
where
    F: FnMut(usize) -> T,
    S: Fn(&T) -> f64,
{
    ctl.validate()?;
    let mut out = Vec::new();
    let mut partial = 0.0_f64;
    let mut run = 0;
    let mut last = 0.0_f64;
    for k in 0..ctl.max_terms {
        let t = term(k);
        let mag = size(&t).abs();
        if !mag.is_finite() {
            return Err(Error::ConvergenceError {
                partial,
                terms: k,
                last_term: mag,
            });
        }
        partial += mag;
        let tail = if mag == 0.0 {
            0.0
        } else if mag < last {
            let r = mag / last;
            mag * r / (1.0 - r)
        } else {
            f64::INFINITY
        };
        last = mag;
        out.push(t);
        if mag <= ctl.rel_tol * partial && tail <= ctl.rel_tol * partial {
            run += 1;
            if run == SMALL_RUN {
                return Ok(out);
            }
        } else {
            run = 0;
        }
    }
    Err(Error::ConvergenceError {
        partial,
        terms: ctl.max_terms,
        last_term: last,
    })
}
