use std::fs;
use std::io::{self, Write};

use anyhow::{anyhow, bail, Context, Result};
use greenquad::convergence::{convergence_study, order_range, write_convergence};
use greenquad::expr::{parse, Expr};
use greenquad::io::{
    load_model, load_region, load_rule, load_solid, load_trim_points, loops_to_json,
    region_to_json, solid_to_json, write_moments, write_rule, Model,
};
use greenquad::moments::{geometric_moments_2d, geometric_moments_3d};
use greenquad::planar::{spectral_pe_rule_refined, spectral_rule};
use greenquad::shapes;
use greenquad::surface::{surfaces_rule, NormalMode};
use greenquad::trim_fit::{closure_check, fit_trim_curves};
use greenquad::volume::volume_rule;
use greenquad::Point2;
use log::{info, warn};
use serde_json::json;

use crate::{Command, Mode, Normal, Sample};

/// 1 for invalid input, 2 for numeric failures.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    let numeric = e.chain().any(|cause| {
        cause
            .downcast_ref::<greenquad::Error>()
            .is_some_and(greenquad::Error::is_numeric)
            || cause
                .downcast_ref::<greenquad::expr::ExprError>()
                .is_some_and(greenquad::expr::ExprError::is_domain)
    });
    if numeric {
        2
    } else {
        1
    }
}

fn emit(output: Option<&str>, bytes: &[u8]) -> Result<()> {
    match output {
        Some(path) => fs::write(path, bytes).with_context(|| format!("cannot write {path}")),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

fn emit_json(output: Option<&str>, value: &serde_json::Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(output, text.as_bytes())
}

fn expression(text: &str) -> Result<Expr> {
    parse(text).with_context(|| format!("cannot parse expression '{text}'"))
}

fn positive(name: &str, n: usize) -> Result<usize> {
    if n == 0 {
        bail!("{name} must be positive");
    }
    Ok(n)
}

fn parse_orders(text: &str) -> Result<Vec<usize>> {
    let parts: Vec<&str> = text.split(':').collect();
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| anyhow!("bad order '{s}' in '{text}'"))
    };
    let (start, end, step) = match parts.as_slice() {
        [a, b] => (num(a)?, num(b)?, 1),
        [a, b, c] => (num(a)?, num(b)?, num(c)?),
        _ => bail!("orders must look like START:END or START:END:STEP, not '{text}'"),
    };
    Ok(order_range(start, end, step)?)
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Rule2d {
            region,
            mode,
            order,
            antiderivative_order,
            degree,
            extra,
            output,
        } => {
            let r = load_region(&region).with_context(|| format!("cannot load region {region}"))?;
            let rule = match mode {
                Mode::Spectral => {
                    if degree.is_some() {
                        bail!("--degree belongs to --mode pe; spectral mode takes --order");
                    }
                    let q = positive(
                        "--order",
                        order.ok_or_else(|| anyhow!("spectral mode needs --order"))?,
                    )?;
                    let p = positive("--antiderivative-order", antiderivative_order.unwrap_or(q))?;
                    spectral_rule(&r, q, p)?
                }
                Mode::Pe => {
                    if order.is_some() {
                        bail!("--order belongs to --mode spectral; pe mode takes --degree");
                    }
                    let k = degree.ok_or_else(|| anyhow!("pe mode needs --degree"))?;
                    spectral_pe_rule_refined(&r, k, extra)?
                }
            };
            info!("{} points", rule.len());
            let mut buf = Vec::new();
            write_rule(&rule, &mut buf)?;
            emit(output.as_deref(), &buf)
        }
        Command::RuleSurface {
            solid,
            orders,
            normal,
            output,
        } => {
            let [mq, nq] = orders[..] else {
                bail!("--orders takes MQ,NQ");
            };
            let s = load_solid(&solid).with_context(|| format!("cannot load solid {solid}"))?;
            let mode = match normal {
                Normal::Full => NormalMode::Full,
                Normal::Z => NormalMode::Z,
            };
            let rule = surfaces_rule(&s.patches, positive("MQ", mq)?, positive("NQ", nq)?, mode)?;
            if rule.degenerate > 0 {
                warn!(
                    "{} points dropped where the surface normal degenerates",
                    rule.degenerate
                );
            }
            info!("{} points", rule.len());
            let mut buf = Vec::new();
            write_rule(&rule, &mut buf)?;
            emit(output.as_deref(), &buf)
        }
        Command::RuleVolume {
            solid,
            orders,
            output,
        } => {
            let (mq, nq, np) = match orders[..] {
                [mq, nq] => (mq, nq, mq),
                [mq, nq, np] => (mq, nq, np),
                _ => bail!("--orders takes MQ,NQ or MQ,NQ,NP"),
            };
            let s = load_solid(&solid).with_context(|| format!("cannot load solid {solid}"))?;
            let rule = volume_rule(
                &s,
                positive("MQ", mq)?,
                positive("NQ", nq)?,
                positive("NP", np)?,
            )?;
            info!("{} points", rule.len());
            let mut buf = Vec::new();
            write_rule(&rule, &mut buf)?;
            emit(output.as_deref(), &buf)
        }
        Command::Integrate {
            rule,
            model,
            expr,
            pe,
            order,
        } => {
            let e = expression(&expr)?;
            let value = match (rule, model) {
                (Some(path), _) => {
                    let r = load_rule(&path).with_context(|| format!("cannot load rule {path}"))?;
                    info!("{} points", r.len());
                    r.integrate_expr(&e)?
                }
                (None, Some(path)) => {
                    let m =
                        load_model(&path).with_context(|| format!("cannot load model {path}"))?;
                    integrate_model(&m, &e, pe, order)?
                }
                (None, None) => bail!("give either --rule or --model"),
            };
            emit(None, format!("{value:.16e}\n").as_bytes())
        }
        Command::Moments {
            model,
            max_degree,
            output,
        } => {
            let m = load_model(&model).with_context(|| format!("cannot load model {model}"))?;
            let moments = match &m {
                Model::Region(r) => geometric_moments_2d(r, max_degree)?,
                Model::Solid(s) => geometric_moments_3d(s, max_degree)?,
            };
            let mut buf = Vec::new();
            write_moments(&moments, &mut buf)?;
            emit(output.as_deref(), &buf)
        }
        Command::FitTrim {
            points,
            segments,
            degree,
            output,
        } => {
            let blocks = load_trim_points(&points)
                .with_context(|| format!("cannot load points {points}"))?;
            if blocks.is_empty() {
                bail!("{points} holds no points");
            }
            let mut loops = Vec::with_capacity(blocks.len());
            for (i, block) in blocks.iter().enumerate() {
                let curves = fit_trim_curves(block, segments, degree)
                    .with_context(|| format!("block {i}"))?;
                let scale =
                    block
                        .iter()
                        .fold(greenquad::BoundingBox::<2>::empty(), |mut b, p: &Point2| {
                            b.include([p.x, p.y]);
                            b
                        });
                let c = closure_check(
                    &curves,
                    greenquad::planar::LOOP_CLOSURE_TOL * scale.diagonal(),
                );
                if !c.closed {
                    warn!(
                        "block {i} does not close (gap {:e}); it cannot serve as a loop on its own",
                        c.gap
                    );
                }
                loops.push(curves);
            }
            emit_json(
                output.as_deref(),
                &json!({ "loops": loops_to_json(&loops) }),
            )
        }
        Command::Convergence {
            model,
            expr,
            orders,
            output,
        } => {
            let e = expression(&expr)?;
            let orders = parse_orders(&orders)?;
            let m = load_model(&model).with_context(|| format!("cannot load model {model}"))?;
            let rows = convergence_study(&m, &e, &orders)?;
            let mut buf = Vec::new();
            write_convergence(&rows, &mut buf)?;
            emit(output.as_deref(), &buf)
        }
        Command::Sample { name, output } => {
            let value = match name {
                Sample::Circle => region_to_json(&shapes::unit_circle()),
                Sample::Square => region_to_json(&shapes::unit_square()),
                Sample::Annulus => {
                    region_to_json(&shapes::annulus(Point2::new(0.0, 0.0), 1.0, 0.5))
                }
                Sample::Lobed => region_to_json(&shapes::lobed_region(46)),
                Sample::Cube => solid_to_json(&shapes::unit_cube()),
                Sample::Cylinder => solid_to_json(&shapes::capped_cylinder(1.0, 1.0)),
            };
            emit_json(output.as_deref(), &value)
        }
    }
}

fn integrate_model(m: &Model, e: &Expr, pe: bool, order: usize) -> Result<f64> {
    let order = positive("--order", order)?;
    Ok(match m {
        Model::Region(r) if pe => {
            let k = e.polynomial_degree().ok_or_else(|| {
                anyhow!("--pe needs a polynomial expression; drop --pe to integrate '{e}' with the spectral rule")
            })?;
            let rule = spectral_pe_rule_refined(r, k as usize, 0)?;
            info!("degree {k}, {} points", rule.len());
            rule.integrate_expr(e)?
        }
        Model::Region(r) => {
            let rule = spectral_rule(r, order, order)?;
            info!("{} points", rule.len());
            rule.integrate_expr(e)?
        }
        Model::Solid(_) if pe => bail!("--pe applies to planar regions; solids use --order"),
        Model::Solid(s) => {
            let rule = volume_rule(s, order, order, order)?;
            info!("{} points", rule.len());
            rule.integrate_expr(e)?
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_ranges() {
        assert_eq!(parse_orders("4:10:2").unwrap(), vec![4, 6, 8, 10]);
        assert_eq!(parse_orders("1:3").unwrap(), vec![1, 2, 3]);
        assert!(parse_orders("4").is_err());
        assert!(parse_orders("0:3").is_err());
        assert!(parse_orders("a:3").is_err());
    }

    #[test]
    fn exit_codes_follow_error_kind() {
        let numeric = anyhow::Error::new(greenquad::Error::NotConverged {
            change: 1e-3,
            order: 64,
        });
        assert_eq!(exit_code(&numeric.context("moments")), 2);
        let invalid = anyhow::Error::new(greenquad::Error::InvalidArgument("x".into()));
        assert_eq!(exit_code(&invalid), 1);
        assert_eq!(exit_code(&anyhow!("plain")), 1);
    }
}
