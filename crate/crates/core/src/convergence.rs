//! Order sweeps: integrate at increasing quadrature orders and compare each
//! result with the highest order.

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::io::Model;
use crate::planar::spectral_rule;
use crate::volume::volume_rule;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub order: usize,
    pub points: usize,
    pub value: f64,
    /// Distance from the value at the highest order.
    pub error: f64,
}

/// Integrates `f` over `model` at each order: `spectral_rule(n, n)` for
/// regions, `volume_rule(n, n, n)` for solids.
pub fn convergence_study(model: &Model, f: &Expr, orders: &[usize]) -> Result<Vec<ConvergenceRow>> {
    if orders.is_empty() {
        return Err(Error::InvalidArgument("no orders given".into()));
    }
    if let Some(&n) = orders.iter().find(|&&n| n == 0) {
        return Err(Error::InvalidArgument(format!("order {n} is not positive")));
    }
    let mut rows = orders
        .iter()
        .map(|&n| {
            let (points, value) = match model {
                Model::Region(r) => {
                    let rule = spectral_rule(r, n, n)?;
                    (rule.len(), rule.integrate_expr(f)?)
                }
                Model::Solid(s) => {
                    let rule = volume_rule(s, n, n, n)?;
                    (rule.len(), rule.integrate_expr(f)?)
                }
            };
            Ok(ConvergenceRow {
                order: n,
                points,
                value,
                error: 0.0,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let top = orders
        .iter()
        .enumerate()
        .max_by_key(|&(_, n)| *n)
        .map(|(i, _)| i)
        .expect("nonempty");
    let reference = rows[top].value;
    for r in &mut rows {
        r.error = (r.value - reference).abs();
    }
    Ok(rows)
}

/// Orders `start, start + step, …` up to and including `end`.
pub fn order_range(start: usize, end: usize, step: usize) -> Result<Vec<usize>> {
    if start == 0 || step == 0 || end < start {
        return Err(Error::InvalidArgument(format!(
            "bad order range {start}..{end} step {step}"
        )));
    }
    Ok((start..=end).step_by(step).collect())
}

pub fn write_convergence<W: std::io::Write>(rows: &[ConvergenceRow], out: W) -> Result<()> {
    use crate::io::format_number;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["order", "n_points", "value", "abs_error"])?;
    for r in rows {
        w.write_record([
            r.order.to_string(),
            r.points.to_string(),
            format_number(r.value),
            format_number(r.error),
        ])?;
    }
    w.flush()?;
    Ok(())
}
