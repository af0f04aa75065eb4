use std::fmt::Write as _;

use anyhow::Result;
use latsum::emcore::{default_k, GroupTable};
use latsum::exactnum::{format_rational, RationalAngle};
use latsum::polytope::{enumerate_lattice_points, triangulate};
use latsum::remainder::FunctionSpec;
use latsum::{
    bernoulli1d, choose_polarizing_vector, polarize, verify_main_theorem, weighted_sum_breakdown,
    weighted_sum_bruteforce, Limits, MPoly, PolytopeJson, SimplePolytope,
};
use serde_json::{json, Value};

/// What a command prints, in both formats, and whether its checks passed.
pub struct Output {
    pub json: Value,
    pub table: String,
    pub ok: bool,
}

impl Output {
    fn new(json: Value, table: String) -> Self {
        Output {
            json,
            table,
            ok: true,
        }
    }
}

fn simple(p: &PolytopeJson) -> Result<SimplePolytope> {
    Ok(p.to_simple()?)
}

pub fn validate(p: &PolytopeJson) -> Result<Output> {
    let report = p.to_hpolytope()?.validate()?;
    let vertices: Vec<Value> = report
        .vertices
        .iter()
        .map(|v| json!({"id": v.id, "coords": v.coords, "facets": v.tight}))
        .collect();
    let mut table = format!(
        "valid: dim {}, {} facets, {} vertices\n",
        report.dim,
        report.num_facets,
        vertices.len()
    );
    for v in &report.vertices {
        writeln!(table, "  v{} {:?} on facets {:?}", v.id, v.coords, v.tight)?;
    }
    Ok(Output::new(
        json!({"valid": true, "dim": report.dim, "facets": report.num_facets, "vertices": vertices}),
        table,
    ))
}

pub fn sum(
    p: &PolytopeJson,
    poly: &str,
    k: Option<usize>,
    oracle: bool,
    limits: &Limits,
) -> Result<Output> {
    let s = simple(p)?;
    let f = MPoly::parse(poly, s.dim())?;
    let b = weighted_sum_breakdown(&s, &f, k, limits)?;
    let value = format_rational(&b.total);
    let mut json = json!({"value": value, "k": b.k});
    let mut table = format!("{value}\n");
    let mut ok = true;
    if oracle {
        let brute = weighted_sum_bruteforce(&s, &f, limits)?;
        ok = brute == b.total;
        json["oracle"] = json!(format_rational(&brute));
        json["equal"] = json!(ok);
        writeln!(
            table,
            "oracle {} ({})",
            format_rational(&brute),
            if ok { "equal" } else { "MISMATCH" }
        )?;
    }
    Ok(Output { json, table, ok })
}

pub fn count(p: &PolytopeJson, limits: &Limits) -> Result<Output> {
    let s = simple(p)?;
    let b = weighted_sum_breakdown(&s, &MPoly::one(s.dim()), None, limits)?;
    let points = enumerate_lattice_points(&s, limits)?.len();
    let weighted = format_rational(&b.total);
    Ok(Output::new(
        json!({"weighted": weighted, "unweighted": points}),
        format!("weighted {weighted}\nunweighted {points}\n"),
    ))
}

pub fn verify_poly(
    p: &PolytopeJson,
    seeds: &[u64],
    count: usize,
    degree: u32,
    limits: &Limits,
) -> Result<Output> {
    let s = simple(p)?;
    let base = seeds.first().copied().unwrap_or(0);
    let mut cases = Vec::with_capacity(count);
    let mut table = String::new();
    let mut failures = 0;
    for i in 0..count as u64 {
        let f = MPoly::random(base.wrapping_add(i), s.dim(), degree);
        let brute = weighted_sum_bruteforce(&s, &f, limits)?;
        let value = latsum::weighted_sum_polynomial(&s, &f, None, limits)?;
        let equal = brute == value;
        failures += usize::from(!equal);
        writeln!(
            table,
            "{}  {}  {}",
            if equal { "ok  " } else { "FAIL" },
            format_rational(&value),
            f
        )?;
        cases.push(json!({
            "poly": f.to_string(),
            "k": default_k(&s, &f),
            "value": format_rational(&value),
            "oracle": format_rational(&brute),
            "equal": equal,
        }));
    }
    writeln!(table, "{}/{count} exact", count - failures)?;
    Ok(Output {
        json: json!({"cases": cases, "failures": failures}),
        table,
        ok: failures == 0,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn verify_smooth(
    p: &PolytopeJson,
    function: Option<&FunctionSpec>,
    k: usize,
    seeds: &[u64],
    tol: f64,
    threshold: f64,
    limits: &Limits,
) -> Result<Output> {
    let s = simple(p)?;
    let spec = match function {
        Some(f) => f.clone(),
        None => {
            // Unit Gaussian at the vertex centroid.
            let n = s.dim();
            let mut c = vec![0.0; n];
            for v in s.vertices() {
                for (ci, &x) in c.iter_mut().zip(&v.coords) {
                    *ci += x as f64 / s.vertices().len() as f64;
                }
            }
            FunctionSpec::Gaussian {
                center: c,
                sigma: 1.0,
                amplitude: 1.0,
            }
        }
    };
    if spec.dim() != s.dim() {
        return Err(latsum::Error::Dimension(format!(
            "function has dimension {}, polytope {}",
            spec.dim(),
            s.dim()
        ))
        .into());
    }
    let f = spec.build()?;
    let reports = verify_main_theorem(&s, f.as_ref(), k, seeds, tol, limits)?;
    let ok = reports.iter().all(|r| r.defect < threshold);
    let mut table = String::from("seed  k  lhs  main  remainder  defect  quad_err\n");
    for r in &reports {
        writeln!(
            table,
            "{}  {}  {:.12}  {:.12}  {:.6e}  {:.2e}  {:.2e}",
            r.seed, r.k, r.lhs, r.main_term, r.remainder, r.defect, r.quad_error_estimate
        )?;
    }
    Ok(Output {
        json: json!({"function": spec, "threshold": threshold, "reports": reports}),
        table,
        ok,
    })
}

pub fn decompose(p: &PolytopeJson, seed: u64) -> Result<Output> {
    let s = simple(p)?;
    let xi = choose_polarizing_vector(&s, seed)?;
    let cones = polarize(&s, &xi)?;
    let xi_str: Vec<String> = xi.0.iter().map(|c| c.to_string()).collect();
    let mut table = format!("seed {seed}, xi = ({})\n", xi_str.join(", "));
    let mut out = Vec::new();
    for c in &cones {
        writeln!(
            table,
            "  v{} {:?}: facets {:?}, flips {:?}, #v = {}, sign {:+}",
            c.vertex,
            c.apex,
            c.facets,
            c.flips,
            c.flip_count,
            c.sign()
        )?;
        out.push(json!({
            "vertex": c.vertex,
            "apex": c.apex,
            "facets": c.facets,
            "flips": c.flips,
            "flip_count": c.flip_count,
            "sign": c.sign(),
            "normals_sharp": c.normals_sharp,
        }));
    }
    let cells = triangulate(&s).len();
    Ok(Output::new(
        json!({"seed": seed, "xi": xi_str, "cones": out, "simplices": cells}),
        table,
    ))
}

pub fn table_bernoulli(max: usize) -> Result<Output> {
    let b = bernoulli1d::bernoulli_numbers(max);
    let rows: Vec<String> = (1..=max).map(|k| format_rational(b.get(k))).collect();
    let mut table = String::new();
    for (k, r) in rows.iter().enumerate() {
        writeln!(table, "b_{} = {r}", k + 1)?;
    }
    Ok(Output::new(json!({"bernoulli": rows}), table))
}

/// `M^{k,λ}` coefficients `c_1..c_m` for every `λ` of exact order `n`; for
/// `m ≥ 2` these are `Q_{m,λ}(0)`.
pub fn table_qvalues(order: u64, m: usize) -> Result<Output> {
    let mut table = String::new();
    let mut rows = Vec::new();
    for j in 1..order.max(2) {
        let lambda = RationalAngle::from_ratio(j as i64, order as i64);
        if lambda.order() != order {
            continue;
        }
        let op = latsum::m_poly(m, &lambda);
        let coeffs: Vec<String> = (1..=m).map(|i| op.coeff(i).to_string()).collect();
        writeln!(table, "λ = e^(2πi·{j}/{order}): {}", coeffs.join(", "))?;
        rows.push(json!({"angle": format!("{j}/{order}"), "coeffs": coeffs}));
    }
    Ok(Output::new(
        json!({"order": order, "m": m, "rows": rows}),
        table,
    ))
}

pub fn table_groups(p: &PolytopeJson) -> Result<Output> {
    let s = simple(p)?;
    let t = GroupTable::build(&s)?;
    let mut table = String::from("face  facets  |Γ_F|  |Γ_F^♭|\n");
    let mut faces = Vec::new();
    for (g, flat) in t.groups.iter().zip(&t.flats) {
        writeln!(
            table,
            "{}  {:?}  {}  {}",
            g.face,
            g.facets,
            g.order(),
            flat.members.len()
        )?;
        faces.push(json!({"face": g.face, "facets": g.facets, "order": g.order(), "flat": flat.members.len()}));
    }
    Ok(Output::new(
        json!({"faces": faces, "cyclotomic_order": t.cyclotomic_order()}),
        table,
    ))
}
