//! One function per subcommand: parse the input documents, call the
//! library, and collect outputs together with postcondition residuals.

use std::f64::consts::PI;

use matgeo::expmlog::{det_exp_identity, expm, logm_special_orthogonal, logm_spd, logm_unitary, real_log_exists, Obstruction};
use matgeo::lattices::{integer_det, is_unimodular_integer, lattices_equal, reduce_mod, round_integer_matrix, Lattice, INTEGER_TOL};
use matgeo::linalg::{inner_product, orthonormality_residual};
use matgeo::manifolds::{geodesic, geodesic_spd, metric_gl, polar_decompose, Group, GroupPoint, SpdMatrix};
use matgeo::metricspace::{hausdorff, FinitePointSet, SampledPath};
use matgeo::projective::{affine_chart, annihilator, apply_projective, chart_extract, graph_chart, graph_chart_coords, GrassPoint};
use matgeo::spectral::{cayley_hamilton_residual, char_poly, eigh};
use matgeo::submersion::{holonomy_phase, BasePath, Submersion, SubmersionKind};
use matgeo::{Field, Matrix, Vector};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::document::{matrix_value, parse_matrix, parse_vector, scalar_value, vector_value};
use crate::{CliError, Command, CurvatureKind, GeodesicGroup, GrassOp, LatticeOp, LiftKind, LogKind, ProjOp};

/// The primary document and the optional `--in2` / `--in3` documents.
pub struct Docs<'a> {
    pub primary: &'a str,
    pub in2: Option<&'a str>,
    pub in3: Option<&'a str>,
}

impl<'a> Docs<'a> {
    fn slot(&self, slot: &'static str) -> Result<&'a str, CliError> {
        match slot {
            "--in" => Ok(self.primary),
            "--in2" => self.in2.ok_or(CliError::MissingInput(slot)),
            _ => self.in3.ok_or(CliError::MissingInput(slot)),
        }
    }

    fn matrix(&self, slot: &'static str) -> Result<Matrix, CliError> {
        parse_matrix(self.slot(slot)?).map_err(|err| CliError::Document { slot, err })
    }

    fn vector(&self, slot: &'static str) -> Result<Vector, CliError> {
        parse_vector(self.slot(slot)?).map_err(|err| CliError::Document { slot, err })
    }
}

/// Named outputs and `(name, value, default tolerance)` residuals.
#[derive(Default)]
pub struct Outcome {
    pub outputs: Map<String, Value>,
    pub residuals: Vec<(&'static str, f64, f64)>,
}

impl Outcome {
    fn out(&mut self, name: &str, v: Value) -> &mut Self {
        self.outputs.insert(name.to_string(), v);
        self
    }

    fn res(&mut self, name: &'static str, value: f64, tol: f64) -> &mut Self {
        self.residuals.push((name, value, tol));
        self
    }
}

fn rel(num: f64, den: f64) -> f64 {
    num / den.max(f64::MIN_POSITIVE)
}

fn identity_residual(m: &Matrix) -> f64 {
    m.dist(&Matrix::identity(m.rows(), m.field()))
}

pub fn execute(cmd: &Command, docs: &Docs) -> Result<Outcome, CliError> {
    let mut o = Outcome::default();
    match cmd {
        Command::Expm(_) => {
            let a = docs.matrix("--in")?;
            // Checks squareness before expm, which panics on shape misuse.
            let (lhs, rhs) = det_exp_identity(&a)?;
            let e = expm(&a);
            let inv = &e.value * &expm(&-&a).value;
            o.out("exp", matrix_value(&e.value))
                .out("scaling_squarings", json!(e.scaling_squarings))
                .out("taylor_terms", json!(e.taylor_terms))
                .res("det_exp", rel((lhs - rhs).norm(), rhs.norm()), 1e-9)
                .res("inverse", identity_residual(&inv) / (a.rows() as f64).sqrt(), 1e-9);
        }
        Command::Detexp(_) => {
            let a = docs.matrix("--in")?;
            let (lhs, rhs) = det_exp_identity(&a)?;
            o.out("det_exp", scalar_value(lhs))
                .out("exp_trace", scalar_value(rhs))
                .res("det_exp", rel((lhs - rhs).norm(), rhs.norm()), 1e-9);
        }
        Command::Logm { kind, .. } => log(&mut o, *kind, docs)?,
        Command::Reallog(_) => log(&mut o, LogKind::Real, docs)?,
        Command::Polar(_) => {
            let t = docs.matrix("--in")?;
            let (r, p) = polar_decompose(&t)?;
            let rec = (r.value() * p.value()).dist(&t);
            o.out("r", matrix_value(r.value()))
                .out("p", matrix_value(p.value()))
                .res("recomposition", rel(rec, t.hs_norm()), 1e-9)
                .res("orthogonality", identity_residual(&(&r.value().adjoint() * r.value())), 1e-9);
        }
        Command::Geodesic { group, t, .. } => {
            let y = docs.matrix("--in")?;
            let a = docs.matrix("--in2")?;
            if *group == GeodesicGroup::Spd {
                let p = SpdMatrix::new(y)?;
                let g = geodesic_spd(&p, &a, *t)?;
                o.out("point", matrix_value(g.value()))
                    .res("self_adjoint", g.value().self_adjoint_residual(), 1e-10);
            } else {
                let grp = match group {
                    GeodesicGroup::Gl => Group::GL,
                    GeodesicGroup::Sl => Group::SL,
                    GeodesicGroup::O => Group::O,
                    GeodesicGroup::U => Group::U,
                    GeodesicGroup::Spd => unreachable!(),
                };
                let start = GroupPoint::new(y, grp, None)?;
                let g = geodesic(&start, &a, *t)?;
                o.out("point", matrix_value(g.value()));
                // det(Y·exp(tA)) = det(Y)·exp(t·tr A) along every geodesic.
                let want = start.value().det()? * (a.trace()? * *t).exp();
                let got = g.value().det()?;
                o.res("det", rel((got - want).norm(), want.norm()), 1e-9);
                if matches!(grp, Group::O | Group::U) {
                    o.res("orthogonality", identity_residual(&(&g.value().adjoint() * g.value())), 1e-9);
                }
            }
        }
        Command::Metric(_) => {
            let t = docs.matrix("--in")?;
            let a = docs.matrix("--in2")?;
            let b = match docs.in3 {
                Some(_) => docs.matrix("--in3")?,
                None => a.clone(),
            };
            let v = metric_gl(&t, &a, &b)?;
            let w = metric_gl(&t, &b, &a)?;
            let tinv = t.inverse()?;
            let scale = (&tinv * &a).hs_norm() * (&tinv * &b).hs_norm();
            o.out("value", json!(v)).res("symmetry", rel((v - w).abs(), scale), 1e-12);
        }
        Command::Lattice { op, .. } => lattice(&mut o, *op, docs)?,
        Command::Proj { op, index, .. } => proj(&mut o, *op, *index, docs)?,
        Command::Grass { op, .. } => grass(&mut o, *op, docs)?,
        Command::Lift { kind, steps, t, .. } => lift(&mut o, *kind, *steps, *t, docs)?,
        Command::Curvature { kind, k, step, .. } => curvature(&mut o, *kind, *k, *step, docs)?,
        Command::Hausdorff { p, .. } => {
            let a = FinitePointSet::new(docs.matrix("--in")?.rows_as_vectors(), *p)?;
            let b = FinitePointSet::new(docs.matrix("--in2")?.rows_as_vectors(), *p)?;
            let d = hausdorff(&a, &b)?;
            let back = hausdorff(&b, &a)?;
            o.out("distance", json!(d)).res("symmetry", (d - back).abs(), 1e-12 * d.max(1.0));
        }
        Command::Pathlen { p, .. } => {
            let points = docs.matrix("--in")?.rows_as_vectors();
            let times = match docs.in2 {
                Some(_) => docs.vector("--in2")?.to_real(),
                None => (0..points.len()).map(|i| i as f64).collect(),
            };
            let path = SampledPath::new(times, points, *p)?;
            o.out("length", json!(path.partition_sum()))
                .out("samples", json!(path.points().len()));
        }
        Command::Eigh(_) => {
            let a = docs.matrix("--in")?;
            let e = eigh(&a)?;
            let rec = e.reconstruct().dist(&a);
            o.out("eigenvalues", json!(e.real_eigenvalues()))
                .out("basis", matrix_value(&e.basis))
                .res("reconstruction", rel(rec, a.hs_norm()), 1e-9)
                .res("orthonormality", orthonormality_residual(&e.basis.columns()), 1e-10);
        }
        Command::Charpoly(_) => {
            let a = docs.matrix("--in")?;
            let q = char_poly(&a)?;
            o.out("coefficients", Value::Array(q.coeffs().iter().map(|&c| scalar_value(c)).collect()))
                .res("cayley_hamilton", cayley_hamilton_residual(&a)?, 1e-8);
        }
    }
    Ok(o)
}

fn log(o: &mut Outcome, kind: LogKind, docs: &Docs) -> Result<(), CliError> {
    let b = docs.matrix("--in")?;
    let trip = |l: &Matrix, target: &Matrix| rel(expm(l).value.dist(target), target.hs_norm());
    match kind {
        LogKind::Spd => {
            let p = SpdMatrix::new(b.clone())?;
            let l = logm_spd(&p);
            o.out("log", matrix_value(&l)).res("round_trip", trip(&l, &b), 1e-8);
        }
        LogKind::Unitary => {
            let l = logm_unitary(&b)?;
            o.out("log", matrix_value(&l))
                .res("round_trip", trip(&l, &b.complexify()), 1e-8)
                .res("anti_self_adjoint", (&l + &l.adjoint()).hs_norm(), 1e-9);
        }
        LogKind::So => {
            let l = logm_special_orthogonal(&b)?;
            o.out("log", matrix_value(&l))
                .res("round_trip", trip(&l, &b), 1e-8)
                .res("anti_symmetric", (&l + &l.transpose()).hs_norm(), 1e-9);
        }
        LogKind::Real => {
            let r = real_log_exists(&b)?;
            let obstruction = match r.obstruction {
                Obstruction::None => "None",
                Obstruction::NegativeRealEigenvalue => "NegativeRealEigenvalue",
                Obstruction::Singular => "Singular",
            };
            o.out("exists_real", json!(r.exists_real)).out("obstruction", json!(obstruction));
            if let Some(l) = &r.value {
                o.out("log", matrix_value(l)).res("round_trip", trip(l, &b), 1e-8);
            }
        }
    }
    Ok(())
}

fn lattice(o: &mut Outcome, op: LatticeOp, docs: &Docs) -> Result<(), CliError> {
    let b = docs.matrix("--in")?;
    match op {
        LatticeOp::Covol => {
            let l = Lattice::new(b.clone())?;
            let gram = (&b.transpose() * &b).det()?.re;
            let c = l.covolume();
            o.out("covolume", json!(c)).res("gram", rel((c * c - gram).abs(), c * c), 1e-9);
        }
        LatticeOp::Reduce => {
            let l = Lattice::new(b)?;
            let x = docs.vector("--in2")?;
            let p = reduce_mod(&l, &x)?;
            // x − rep(x) must be a lattice vector.
            let off = l
                .coordinates(&(&x - p.rep()))?
                .iter()
                .map(|c| (c - c.round()).abs())
                .fold(0.0, f64::max);
            o.out("coords", json!(p.coords()))
                .out("rep", vector_value(p.rep()))
                .res("lattice_offset", off, 1e-9);
        }
        LatticeOp::Equal => {
            let l1 = Lattice::new(b)?;
            let l2 = Lattice::new(docs.matrix("--in2")?)?;
            o.out("equal", json!(lattices_equal(&l1, &l2)?));
        }
        LatticeOp::Unimodular => {
            o.out("unimodular", json!(is_unimodular_integer(&b)));
            if let Some(m) = round_integer_matrix(&b, INTEGER_TOL).filter(|m| m.len() == b.cols()) {
                let d = integer_det(&m);
                o.out("det", i64::try_from(d).map(Value::from).unwrap_or_else(|_| json!(d.to_string())));
            }
        }
    }
    Ok(())
}

fn proj(o: &mut Outcome, op: ProjOp, index: Option<usize>, docs: &Docs) -> Result<(), CliError> {
    match op {
        ProjOp::Apply => {
            let a = docs.matrix("--in")?;
            let v = docs.vector("--in2")?;
            let p = matgeo::projective::proj_from(&v)?;
            let q = apply_projective(&a, &p)?;
            // The image line is spanned by A·v, computed directly.
            let w = a.apply(&v)?;
            let c = inner_product(&w, q.rep())?;
            let off = (&w - &q.rep().scale(c)).norm();
            o.out("point", vector_value(q.rep())).res("collinearity", rel(off, w.norm()), 1e-10);
        }
        ProjOp::Chart => {
            let j = index.ok_or(CliError::MissingFlag("--index"))?;
            let x = docs.vector("--in")?;
            let p = affine_chart(j, &x)?;
            let back = chart_extract(j, &p)?;
            o.out("point", vector_value(p.rep()))
                .res("chart_round_trip", rel(back.max_abs_diff(&x), x.norm().max(1.0)), 1e-10);
        }
    }
    Ok(())
}

fn grass(o: &mut Outcome, op: GrassOp, docs: &Docs) -> Result<(), CliError> {
    let lb = docs.matrix("--in")?;
    let n = lb.rows();
    let l = GrassPoint::new(n, &lb.columns())?;
    match op {
        GrassOp::Graph => {
            let m = GrassPoint::new(n, &docs.matrix("--in2")?.columns())?;
            let a = docs.matrix("--in3")?;
            let g = graph_chart(&l, &m, &a)?;
            let back = graph_chart_coords(&l, &m, &g)?;
            if let Some(basis) = g.basis_matrix() {
                o.out("basis", matrix_value(&basis));
            }
            o.out("projector", matrix_value(g.projector()))
                .res("chart_round_trip", rel(back.dist(&a), a.hs_norm().max(1.0)), 1e-9);
        }
        GrassOp::Annihilator => {
            let perp = annihilator(&l);
            let sum = l.projector() + perp.projector();
            o.out("dim", json!(perp.dim()));
            if let Some(basis) = perp.basis_matrix() {
                o.out("basis", matrix_value(&basis));
            }
            o.out("projector", matrix_value(perp.projector()))
                .res("complementarity", identity_residual(&sum), 1e-9);
        }
    }
    Ok(())
}

/// Total-space point: real vectors as given, complex vectors realified.
fn total_space_point(v: &Vector, complex: bool) -> Vector {
    if complex {
        v.complexify().realify()
    } else {
        Vector::real(&v.to_real())
    }
}

fn real_dot(a: &Vector, b: &Vector) -> f64 {
    a.to_real().iter().zip(b.to_real()).map(|(x, y)| x * y).sum()
}

fn lift(o: &mut Outcome, kind: LiftKind, steps: usize, t: f64, docs: &Docs) -> Result<(), CliError> {
    let complex = kind == LiftKind::Cp;
    let p0 = total_space_point(&docs.vector("--in")?, complex);
    let q = total_space_point(&docs.vector("--in2")?, complex);
    let sub = match kind {
        LiftKind::Rp => Submersion::new(SubmersionKind::SphereToRP(p0.dim() - 1))?,
        LiftKind::Cp => Submersion::new(SubmersionKind::SphereToCP(p0.dim() / 2 - 1))?,
    };
    let p0 = &p0 * (1.0 / p0.norm());
    let q = &q - &(&p0 * real_dot(&q, &p0));
    if q.norm() <= 1e-12 {
        return Err(CliError::Domain(matgeo::Error::InvalidArgument(
            "direction must not be parallel to the start point".into(),
        )));
    }
    let q = &q * (1.0 / q.norm());
    let (a, b) = (p0.clone(), q.clone());
    let alpha = BasePath::projected(sub, move |s| &(&a * (PI * s).cos()) + &(&b * (PI * s).sin()), 0.0, t, steps)?;
    let lifted = sub.horizontal_lift(&alpha, &p0)?;
    let end = lifted.end();
    let shown = if complex { Vector::from_realified(end) } else { end.clone() };
    o.out("end", vector_value(&shown));
    let closed = alpha.gap() <= 1e-9;
    o.out("closed", json!(closed));
    if closed && complex {
        o.out("holonomy_phase", json!(holonomy_phase(&p0, end)));
    }
    o.res("projection", lifted.projection_residual(&sub, &alpha)?, 1e-6)
        .res("horizontality", lifted.horizontality_residual(&sub)?, 1e-6);
    Ok(())
}

fn curvature(o: &mut Outcome, kind: CurvatureKind, k: Option<usize>, step: Option<f64>, docs: &Docs) -> Result<(), CliError> {
    let read = |slot: &'static str| -> Result<Vector, CliError> {
        Ok(match kind {
            CurvatureKind::Cp => total_space_point(&docs.vector(slot)?, true),
            // Row-major entries of the matrix.
            CurvatureKind::Spd => Vector::real(&docs.matrix(slot)?.entries().iter().map(|z| z.re).collect::<Vec<_>>()),
            _ => total_space_point(&docs.vector(slot)?, false),
        })
    };
    let p = read("--in")?;
    let x1 = read("--in2")?;
    let x2 = read("--in3")?;
    let kind = match kind {
        CurvatureKind::Rp => SubmersionKind::SphereToRP(p.dim() - 1),
        CurvatureKind::Cp => SubmersionKind::SphereToCP(p.dim() / 2 - 1),
        CurvatureKind::Spd => SubmersionKind::GlToSpd((p.dim() as f64).sqrt().round() as usize),
        CurvatureKind::Product => SubmersionKind::ProductProjection {
            n: p.dim(),
            k: k.ok_or(CliError::MissingFlag("--k"))?,
        },
    };
    let sub = Submersion::new(kind)?;
    let u1 = sub.pushforward(&p, &x1)?;
    let u2 = sub.pushforward(&p, &x2)?;
    let h = step.unwrap_or(matgeo::submersion::CURVATURE_STEP);
    let c12 = sub.curvature_with_step(&p, &u1, &u2, h)?;
    let c21 = sub.curvature_with_step(&p, &u2, &u1, h)?;
    o.out("curvature", vector_value(&c12))
        .out("norm", json!(c12.norm()))
        .res("antisymmetry", (&c12 + &c21).norm(), 1e-6);
    Ok(())
}

/// Rows of a point-set document as points.
trait MatrixExt {
    fn rows_as_vectors(&self) -> Vec<Vector>;
}

impl MatrixExt for Matrix {
    fn rows_as_vectors(&self) -> Vec<Vector> {
        (0..self.rows())
            .map(|i| {
                let row: Vec<Complex64> = (0..self.cols()).map(|j| self.get(i, j)).collect();
                match self.field() {
                    Field::Real => Vector::real(&row.iter().map(|z| z.re).collect::<Vec<_>>()),
                    Field::Complex => Vector::complex(&row),
                }
            })
            .collect()
    }
}
