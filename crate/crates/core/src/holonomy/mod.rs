//! Holonomy of Deligne cocycles on triangulated cycles.
//!
//! For a top simplex `σ` in chart `i_σ`, the local amplitude sums, over every
//! flag `σ ⊃ τ₁ ⊃ … ⊃ τⱼ` obtained by deleting one vertex at a time, the
//! integral of `ω^(p-j)` indexed by the chart tuple `(i_σ, i_τ₁, …, i_τⱼ)` over
//! `τⱼ`, weighted by the product of the face signs `(-1)^k`. The last step,
//! `j = p`, evaluates `g` at a vertex. Tuples with a repeated chart vanish.

use rayon::prelude::*;
use serde::Serialize;

use crate::circle::{reduce, CircleValue};
use crate::deligne::DeligneCochain;
use crate::error::{Error, Result};
use crate::form::FormField;
use crate::quadrature::SimplexRule;
use crate::simplicial::{ChartId, Simplex, SimplicialComplex, Subordination};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct HolonomyOptions {
    /// Gauss points per axis of the collapsed simplex rule.
    pub order: usize,
    /// Re-integrate with `order + 3` points and record the disagreement.
    pub estimate_error: bool,
    /// Total disagreement above which the result is flagged and the finer
    /// rule's value is reported. The switch is made for the whole cycle at
    /// once: mixing rules would spoil the cancellation of quadrature errors
    /// between neighbouring simplices.
    pub flag_threshold: f64,
}

impl Default for HolonomyOptions {
    fn default() -> Self {
        HolonomyOptions { order: 5, estimate_error: true, flag_threshold: 1e-7 }
    }
}

/// Integral of `form` over one realized simplex in its sorted orientation,
/// evaluated with `rule`.
fn integrate_simplex(k: &SimplicialComplex, s: &Simplex, form: &FormField, rule: &SimplexRule) -> f64 {
    let r = k.realize(s);
    if s.dim() == 0 {
        return form.evaluate(&r.vertex(0), &[]);
    }
    let nodes = rule.points.iter().zip(&rule.weights);
    match r.constant_tangents() {
        Some(t) => nodes.map(|(x, w)| w * form.evaluate(&r.point(x), t)).sum(),
        None => nodes
            .map(|(x, w)| {
                let (p, t) = r.point_and_tangents(x);
                w * form.evaluate(&p, &t)
            })
            .sum(),
    }
}

/// `∫_s form` over one simplex (sorted orientation).
pub fn integrate_over_simplex(k: &SimplicialComplex, s: &Simplex, form: &FormField, order: usize) -> f64 {
    let rule = SimplexRule::cached(s.dim().max(1), order);
    integrate_simplex(k, s, form, &rule)
}

/// `∫_c form` over a chain of the complex.
pub fn integrate_chain(k: &SimplicialComplex, chain: &crate::simplicial::Chain, form: &FormField, order: usize) -> f64 {
    let terms: Vec<(&Simplex, i64)> = chain.terms().collect();
    let parts: Vec<f64> = terms.par_iter().map(|(s, c)| *c as f64 * integrate_over_simplex(k, s, form, order)).collect();
    parts.iter().sum()
}

struct Amplitude {
    value: f64,
    /// The value with the finer rule, when estimating.
    fine: f64,
    error: f64,
}

fn local_amplitude_impl(
    xi: &DeligneCochain,
    k: &SimplicialComplex,
    sub: &Subordination,
    sigma: &Simplex,
    opts: &HolonomyOptions,
) -> Result<Amplitude> {
    let p = xi.degree();
    let top = sub.chart(sigma)?;
    let (mut value, mut fine_value) = (0.0, 0.0);
    let mut error = 0.0f64;
    // Depth-first over flags: (face, chart tuple, sign).
    let mut stack: Vec<(Simplex, Vec<ChartId>, f64)> = vec![(sigma.clone(), vec![top], 1.0)];
    while let Some((face, tuple, sign)) = stack.pop() {
        let j = tuple.len() - 1;
        let form = xi.component(p - j).value(&tuple)?;
        let d = face.dim();
        let rule = SimplexRule::cached(d.max(1), opts.order);
        let v = integrate_simplex(k, &face, &form, &rule);
        let mut fine = v;
        if opts.estimate_error && d > 0 {
            fine = integrate_simplex(k, &face, &form, &SimplexRule::cached(d, opts.order + 3));
            error += (fine - v).abs();
        }
        value += sign * v;
        fine_value += sign * fine;
        for (idx, f) in face.faces() {
            let c = sub.chart(&f)?;
            if tuple.contains(&c) {
                continue;
            }
            let mut next = tuple.clone();
            next.push(c);
            stack.push((f, next, if idx % 2 == 0 { sign } else { -sign }));
        }
    }
    Ok(Amplitude { value, fine: fine_value, error })
}

/// The amplitude of one top simplex, as an angle.
pub fn local_amplitude(
    xi: &DeligneCochain,
    k: &SimplicialComplex,
    sub: &Subordination,
    sigma: &Simplex,
    opts: &HolonomyOptions,
) -> Result<CircleValue> {
    if sigma.dim() != xi.degree() {
        return Err(Error::Structure(format!("{sigma} is not a {}-simplex", xi.degree())));
    }
    let a = local_amplitude_impl(xi, k, sub, sigma, opts)?;
    Ok(CircleValue::float(if a.error > opts.flag_threshold { a.fine } else { a.value }))
}

#[derive(Clone, Debug, Serialize)]
pub struct HolonomyResult {
    pub value: CircleValue,
    /// Per top simplex: key, chain coefficient, amplitude.
    pub amplitudes: Vec<(String, i64, CircleValue)>,
    pub quadrature_error: f64,
    pub flagged: bool,
}

/// Exact holonomy of discrete data: only full flags down to vertices count.
fn exact_holonomy(xi: &DeligneCochain, k: &SimplicialComplex, sub: &Subordination) -> Result<HolonomyResult> {
    use num_rational::Rational64;
    let table = xi.exact_table().expect("exact data");
    let lookup = |t: &[ChartId]| -> Rational64 {
        match crate::form::sort_with_sign(t) {
            None => Rational64::from_integer(0),
            Some((s, sign)) => table.get(&s).copied().unwrap_or_default() * sign,
        }
    };
    let mut total = Rational64::from_integer(0);
    let mut amplitudes = Vec::new();
    for (sigma, coeff) in k.chain().terms() {
        let mut amp = Rational64::from_integer(0);
        let mut stack = vec![(sigma.clone(), vec![sub.chart(sigma)?], 1i64)];
        while let Some((face, tuple, sign)) = stack.pop() {
            if face.dim() == 0 {
                amp += lookup(&tuple) * sign;
                continue;
            }
            for (idx, f) in face.faces() {
                let c = sub.chart(&f)?;
                if tuple.contains(&c) {
                    continue;
                }
                let mut next = tuple.clone();
                next.push(c);
                stack.push((f, next, if idx % 2 == 0 { sign } else { -sign }));
            }
        }
        total += amp * coeff;
        amplitudes.push((sigma.key(), coeff, CircleValue::from_rational(amp)));
    }
    Ok(HolonomyResult { value: CircleValue::from_rational(total), amplitudes, quadrature_error: 0.0, flagged: false })
}

/// `hol(ξ)` on the cycle carried by `k`: the amplitudes weighted by the chain
/// coefficients, summed in lexicographic simplex order.
pub fn holonomy(xi: &DeligneCochain, k: &SimplicialComplex, sub: &Subordination, opts: &HolonomyOptions) -> Result<HolonomyResult> {
    if !k.chain().boundary().is_empty() {
        return Err(Error::Precondition("holonomy needs a cycle; the chain has a boundary".into()));
    }
    if let Some(d) = k.chain().dim() {
        if d != xi.degree() {
            return Err(Error::Structure(format!("{d}-cycle paired with a degree-{} cochain", xi.degree())));
        }
    }
    if xi.exact_table().is_some() {
        return exact_holonomy(xi, k, sub);
    }
    let terms: Vec<(&Simplex, i64)> = k.chain().terms().collect();
    let amps: Vec<Result<Amplitude>> = terms.par_iter().map(|(s, _)| local_amplitude_impl(xi, k, sub, s, opts)).collect();
    let amps: Vec<Amplitude> = amps.into_iter().collect::<Result<_>>()?;
    let error: f64 = terms.iter().zip(&amps).map(|((_, c), a)| c.unsigned_abs() as f64 * a.error).sum();
    let flagged = error > opts.flag_threshold;
    let mut total = 0.0;
    let mut amplitudes = Vec::with_capacity(terms.len());
    for ((s, c), a) in terms.iter().zip(&amps) {
        let v = if flagged { a.fine } else { a.value };
        total += *c as f64 * reduce(v);
        amplitudes.push((s.key(), *c, CircleValue::float(v)));
    }
    Ok(HolonomyResult { value: CircleValue::float(total), amplitudes, quadrature_error: error, flagged })
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterCheck {
    pub holonomy: CircleValue,
    pub flux: f64,
    pub residual: f64,
}

/// Compare `hol(ξ, ∂W)` with `∫_W curv(ξ)`, where the curvature on each top
/// simplex of `W` is `dωᵖ` in that simplex's chart.
pub fn character_property_check(xi: &DeligneCochain, w: &SimplicialComplex, sub: &Subordination, opts: &HolonomyOptions) -> Result<CharacterCheck> {
    let p = xi.degree();
    if w.chain().dim().is_some_and(|d| d != p + 1) {
        return Err(Error::Structure(format!("need a {}-chain", p + 1)));
    }
    let boundary = w.with_chain(w.chain().boundary())?;
    let hol = holonomy(xi, &boundary, sub, opts)?;
    let curv = xi.component(p).d();
    let terms: Vec<(&Simplex, i64)> = w.chain().terms().collect();
    let parts: Vec<Result<f64>> = terms
        .par_iter()
        .map(|(s, c)| {
            let form = curv.value(&[sub.chart(s)?])?;
            Ok(*c as f64 * integrate_over_simplex(w, s, &form, opts.order))
        })
        .collect();
    let mut flux = 0.0;
    for part in parts {
        flux += part?;
    }
    let residual = hol.value.distance(&CircleValue::float(flux));
    Ok(CharacterCheck { holonomy: hol.value, flux, residual })
}
