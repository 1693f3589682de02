// ================================================================================
// (3,3)-isogenies: kernel normalization, scaling recovery, evaluation, duals
// ================================================================================

//! The (3,3)-isogeny `phi = C_lambda . M33 . (.)^3 . S_K` between principally
//! polarized abelian surfaces in Hesse form.
//!
//! The coordinate cube map composed with the Fourier transform `M33` is the
//! isogeny with kernel `K_2 = <Q_1, Q_2>`, up to the coordinate scaling
//! `C_lambda` that puts the codomain back into Hesse form.  An arbitrary
//! maximal isotropic kernel is first moved onto `K_2` by a symplectic
//! transformation `S_K` found in closed form (or by a short word search), so
//! one evaluation costs nine coordinate cubes plus at most nine
//! multiplications.
//!
//! The scaling `lambda` is recovered from a pair of nine-torsion points lying
//! above the kernel generators; surfaces whose transformed neutral vector has
//! zero entries (products and their neighbours) additionally need the sum and
//! difference of the two points.  The construction follows the torsion images
//! `phi(R_i)` all the way through, which also yields the dual isogeny and a
//! `[3]` built as `dual . phi`.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::fp2::{FieldParams, Fp2, OpCounter};
use crate::proj::{P4, P8};
use crate::surface::{
    cubic_parts, dft_point, even_part, negate_point, star, t_tilde, t_to_d, t_to_h,
    ExceptionalProfile, HesseSurface, SurfaceMove, SurfaceTransform, TorsionVector, COORD_CLASS,
};

// ================================================================================
// The coordinate cube map
// ================================================================================

/// Cubes all nine coordinates: the isogeny core before the Fourier layer.
pub fn cube_map(x: &P8) -> P8 {
    cube_map_counted(x, &mut OpCounter::new())
}

/// [`cube_map`] with its nine cubings recorded on `ops`.
pub fn cube_map_counted(x: &P8, ops: &mut OpCounter) -> P8 {
    let c = x.coords();
    let cubes = std::array::from_fn(|i| c[i].cube_counted(ops));
    P8::new(cubes).expect("cubing preserves nonzero projective points")
}

// ================================================================================
// Kernel specifications
// ================================================================================

/// Nine-torsion input data for one (3,3)-isogeny.
///
/// `r1`, `r2` lie above the kernel generators: `3 r1` and `3 r2` are the
/// 3-torsion points with exponent vectors `u` and `v`, whose span is the
/// kernel.  The span `<u, v>` must be maximal isotropic for the symplectic
/// pairing.
///
/// The optional extras widen the range of inputs the builder can handle:
/// `r3 = r1 + r2` and `r4 = r1 - r2` feed the exceptional scaling relations,
/// `aux` points fit the codomain cubic parameter when the neutral vector
/// degenerates, and a `witness` pair `(x, 3x)` pins the dual scaling on
/// product surfaces.
#[derive(Clone, Debug)]
pub struct KernelSpec {
    r1: P8,
    r2: P8,
    r3: Option<P8>,
    r4: Option<P8>,
    aux: Vec<P8>,
    witness: Option<(P8, P8)>,
    u: TorsionVector,
    v: TorsionVector,
}

impl KernelSpec {
    /// A kernel spanned by the 3-torsion points below `r1` and `r2`.
    pub fn new(r1: P8, r2: P8, u: TorsionVector, v: TorsionVector) -> Result<Self> {
        if u.is_zero() || v.is_zero() || v == u || v == u.scaled(2) {
            return Err(Error::InvalidKernel("kernel generators must be independent"));
        }
        if u.pairing(&v) != 0 {
            return Err(Error::InvalidKernel(
                "kernel generators must span an isotropic subgroup",
            ));
        }
        Ok(Self {
            r1,
            r2,
            r3: None,
            r4: None,
            aux: Vec::new(),
            witness: None,
            u,
            v,
        })
    }

    /// Nine-torsion generators above the canonical kernel `K_2 = <Q_1, Q_2>`.
    pub fn canonical(r1: P8, r2: P8) -> Self {
        Self::new(
            r1,
            r2,
            TorsionVector::new(0, 0, 1, 0),
            TorsionVector::new(0, 0, 0, 1),
        )
        .expect("K_2 is isotropic")
    }

    /// Attaches the sum `r1 + r2` and difference `r1 - r2`.
    pub fn with_sums(mut self, r3: P8, r4: P8) -> Self {
        self.r3 = Some(r3);
        self.r4 = Some(r4);
        self
    }

    /// Attaches a non-torsion sample point used to fit the codomain `d` when
    /// the transported neutral carries no cubic information.
    pub fn with_aux(mut self, point: P8) -> Self {
        self.aux.push(point);
        self
    }

    /// Attaches a witness pair `(x, 3x)`; required for duals of isogenies
    /// onto product surfaces.
    pub fn with_witness(mut self, x: P8, tripled: P8) -> Self {
        self.witness = Some((x, tripled));
        self
    }

    pub fn r1(&self) -> &P8 {
        &self.r1
    }

    pub fn r2(&self) -> &P8 {
        &self.r2
    }

    pub fn r3(&self) -> Option<&P8> {
        self.r3.as_ref()
    }

    pub fn r4(&self) -> Option<&P8> {
        self.r4.as_ref()
    }

    pub fn u(&self) -> TorsionVector {
        self.u
    }

    pub fn v(&self) -> TorsionVector {
        self.v
    }

    /// All points carried by the spec, for membership checks.
    fn points(&self) -> Vec<&P8> {
        let mut out = vec![&self.r1, &self.r2];
        out.extend(self.r3.iter());
        out.extend(self.r4.iter());
        out.extend(self.aux.iter());
        if let Some((x, y)) = &self.witness {
            out.push(x);
            out.push(y);
        }
        out
    }

    fn mapped(&self, transform: &SurfaceTransform) -> KernelSpec {
        let mv = |p: &P8| transform.apply_point(p);
        KernelSpec {
            r1: mv(&self.r1),
            r2: mv(&self.r2),
            r3: self.r3.as_ref().map(mv),
            r4: self.r4.as_ref().map(mv),
            aux: self.aux.iter().map(mv).collect(),
            witness: self.witness.as_ref().map(|(x, y)| (mv(x), mv(y))),
            u: transform.torsion_action(&self.u),
            v: transform.torsion_action(&self.v),
        }
    }
}

// ================================================================================
// Kernel normalization: moving an isotropic kernel onto K_2
// ================================================================================

/// A kernel specification rewritten over the transformed surface, with its
/// kernel moved onto `K_2`.
#[derive(Clone, Debug)]
pub struct NormalizedKernel {
    pub transform: SurfaceTransform,
    pub surface: HesseSurface,
    pub spec: KernelSpec,
}

/// Finds the symplectic transformation `S_K` with `S_K(u) = Q_1`,
/// `S_K(v) = Q_2` and rewrites the surface and all spec points through it.
pub fn normalize_kernel(surface: &HesseSurface, spec: &KernelSpec) -> Result<NormalizedKernel> {
    for point in spec.points() {
        if !surface.contains(point) {
            return Err(Error::NotOnVariety);
        }
    }
    let fp = surface.params();
    let transform = kernel_transform(&fp, &spec.u, &spec.v)?;
    debug_assert_eq!(transform.torsion_action(&spec.u), TorsionVector::new(0, 0, 1, 0));
    debug_assert_eq!(transform.torsion_action(&spec.v), TorsionVector::new(0, 0, 0, 1));
    Ok(NormalizedKernel {
        surface: transform.apply_surface(surface),
        spec: spec.mapped(&transform),
        transform,
    })
}

/// The transformation carrying the ordered pair `(u, v)` onto `(Q_1, Q_2)`.
///
/// Two shapes have closed forms: the canonical kernel itself (identity) and
/// `<P_1 + a Q_1 + b Q_2, P_2 + b Q_1 + c Q_2>`, which is handled by
/// `[-1] . M33 . C` with the scaling exponents `(-a, -b, -c)`.  The remaining
/// Lagrangian bases are reached by a breadth-first search over the generator
/// moves; scalings and the Fourier transform generate the full symplectic
/// action, so the search always terminates within a few moves.
fn kernel_transform(
    fp: &FieldParams,
    u: &TorsionVector,
    v: &TorsionVector,
) -> Result<SurfaceTransform> {
    let q1 = TorsionVector::new(0, 0, 1, 0);
    let q2 = TorsionVector::new(0, 0, 0, 1);
    if (*u, *v) == (q1, q2) {
        return Ok(SurfaceTransform::identity(fp));
    }
    if u.a == 1 && u.b == 0 && v.a == 0 && v.b == 1 {
        // Isotropy forces v.c == u.e here, so (a, b, c) determines the span.
        let (a, b, c) = (u.c, u.e, v.e);
        let mut s = SurfaceTransform::identity(fp);
        if (a, b, c) != (0, 0, 0) {
            s.push(SurfaceMove::Scale((3 - a) % 3, (3 - b) % 3, (3 - c) % 3));
        }
        s.push(SurfaceMove::Dft);
        s.push(SurfaceMove::Negate);
        return Ok(s);
    }
    const MAX_DEPTH: usize = 12;
    let gens = [
        SurfaceMove::Dft,
        SurfaceMove::Scale(1, 0, 0),
        SurfaceMove::Scale(0, 1, 0),
        SurfaceMove::Scale(0, 0, 1),
    ];
    let mut seen: HashMap<(TorsionVector, TorsionVector), SurfaceTransform> = HashMap::new();
    let mut queue = VecDeque::new();
    seen.insert((*u, *v), SurfaceTransform::identity(fp));
    queue.push_back((*u, *v));
    while let Some(pair) = queue.pop_front() {
        let word = seen[&pair].clone();
        if word.moves().len() >= MAX_DEPTH {
            break;
        }
        for mv in gens {
            let mut next = word.clone();
            next.push(mv);
            let image = (next.torsion_action(u), next.torsion_action(v));
            if image == (q1, q2) {
                return Ok(next);
            }
            if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(image) {
                e.insert(next);
                queue.push_back(image);
            }
        }
    }
    Err(Error::WordSearchExhausted(MAX_DEPTH as u32))
}

// ================================================================================
// Scaling recovery
// ================================================================================

/// Recovers `lambda` on a surface whose transformed neutral has full support,
/// from the two nine-torsion points above `Q_1` and `Q_2`.
///
/// The four coordinate ratios of the images `x_i = M33((r_i)^3)` chain the
/// five scaling classes together; a zero in any referenced coordinate means
/// the generic ratios do not apply and the exceptional relations (which need
/// the sum and difference points) must be used instead.
pub fn lambda_generic(r1: &P8, r2: &P8) -> Result<P4> {
    lambda_generic_counted(r1, r2, &mut OpCounter::new())
}

fn lambda_generic_counted(r1: &P8, r2: &P8, ops: &mut OpCounter) -> Result<P4> {
    let x1 = dft_point(&cube_map_counted(r1, ops));
    let x2 = dft_point(&cube_map_counted(r2, ops));
    let c1 = x1.coords();
    let c2 = x2.coords();
    let referenced = [c1[0], c1[1], c1[4], c1[5], c1[6], c1[8], c2[0], c2[3]];
    if referenced.iter().any(Fp2::is_zero) {
        return Err(Error::ScalingUnderdetermined(
            "a generic scaling ratio hit a zero coordinate",
        ));
    }
    // (l0:l1) = (c1[1]:c1[0]),  (l0:l2) = (c2[3]:c2[0]),
    // (l2:l3) = (c1[4]:c1[6]),  (l3:l4) = (c1[5]:c1[8]);
    // cleared of denominators from the l4 end.
    let mul = |a: Fp2, b: Fp2, ops: &mut OpCounter| a.mul_counted(&b, ops);
    let head = mul(c1[4], c1[5], ops);
    let l0 = mul(mul(head, c2[3], ops), c1[1], ops);
    let l1 = mul(mul(head, c2[3], ops), c1[0], ops);
    let l2 = mul(mul(head, c2[0], ops), c1[1], ops);
    let l3 = mul(mul(mul(c1[5], c1[6], ops), c2[0], ops), c1[1], ops);
    let l4 = mul(mul(mul(c1[8], c1[6], ops), c2[0], ops), c1[1], ops);
    Ok(P4::new([l0, l1, l2, l3, l4])
        .expect("products of nonzero coordinates are nonzero")
        .normalized())
}

/// One exceptional scaling relation `(lambda_a : lambda_b) =
/// (x_{point}[num] : x_{point}[den])`, valid whenever the transformed neutral
/// coordinate guarding its table is nonzero.
struct Relation {
    a: usize,
    b: usize,
    point: usize,
    num: usize,
    den: usize,
}

/// Relation tables indexed by the nonzero entry `t~_i`, `i = 1..4`, of the
/// transformed neutral.  Every relation in table `i` reads only image
/// coordinates that carry `t~_i`, so its numerator and denominator are
/// guaranteed nonzero; any two tables connect all five scaling classes.
const RELATIONS: [[Relation; 4]; 4] = [
    [
        Relation { a: 0, b: 1, point: 0, num: 1, den: 0 },
        Relation { a: 4, b: 3, point: 1, num: 8, den: 7 },
        Relation { a: 2, b: 4, point: 2, num: 7, den: 6 },
        Relation { a: 2, b: 3, point: 3, num: 4, den: 3 },
    ],
    [
        Relation { a: 4, b: 3, point: 0, num: 8, den: 5 },
        Relation { a: 0, b: 2, point: 1, num: 3, den: 0 },
        Relation { a: 1, b: 4, point: 2, num: 5, den: 2 },
        Relation { a: 1, b: 3, point: 3, num: 8, den: 2 },
    ],
    [
        Relation { a: 2, b: 4, point: 0, num: 7, den: 3 },
        Relation { a: 1, b: 4, point: 1, num: 5, den: 1 },
        Relation { a: 0, b: 3, point: 2, num: 4, den: 0 },
        Relation { a: 1, b: 2, point: 3, num: 6, den: 1 },
    ],
    [
        Relation { a: 3, b: 2, point: 0, num: 6, den: 4 },
        Relation { a: 1, b: 3, point: 1, num: 4, den: 2 },
        Relation { a: 1, b: 2, point: 2, num: 3, den: 1 },
        Relation { a: 0, b: 4, point: 3, num: 7, den: 0 },
    ],
];

/// The tail indices of the transformed neutral usable for scaling recovery.
///
/// Fewer than two usable relations means the surface cannot occur as a valid
/// codomain — except for the one configuration (a single nonzero tail entry
/// next to a nonzero head) where the codomain exists but carries an extra
/// automorphism no relation can see through; chains abort on it.
fn usable_tail_indices(profile: &ExceptionalProfile) -> Result<Vec<usize>> {
    let tt = profile.t_tilde.coords();
    let live: Vec<usize> = (1..5).filter(|&i| !tt[i].is_zero()).collect();
    if live.len() >= 2 {
        return Ok(live);
    }
    if live.len() == 1 && profile.nonzero_head {
        return Err(Error::ExtraAutomorphism { step: 0 });
    }
    Err(Error::InvalidSurface(
        "the transformed neutral leaves no usable scaling relations",
    ))
}

/// Recovers `lambda` on an exceptional surface from all four nine-torsion
/// points `r1, r2, r1 + r2, r1 - r2` above the canonical kernel.
///
/// Relations are collected from every table whose guard entry is nonzero and
/// propagated through the ratio graph; redundant relations are cross-checked,
/// so inconsistent torsion data is reported instead of silently absorbed.
pub fn lambda_exceptional(surface: &HesseSurface, rs: [&P8; 4]) -> Result<P4> {
    lambda_exceptional_counted(surface, rs, &mut OpCounter::new())
}

fn lambda_exceptional_counted(
    surface: &HesseSurface,
    rs: [&P8; 4],
    ops: &mut OpCounter,
) -> Result<P4> {
    let live = usable_tail_indices(&surface.exceptional_profile())?;
    let fp = surface.params();
    let xs: Vec<P8> = rs
        .iter()
        .map(|r| dft_point(&cube_map_counted(r, ops)))
        .collect();
    let mut edges = Vec::new();
    for &i in &live {
        for rel in &RELATIONS[i - 1] {
            let num = xs[rel.point].coord(rel.num);
            let den = xs[rel.point].coord(rel.den);
            match (num.is_zero(), den.is_zero()) {
                (false, false) => edges.push((rel.a, rel.b, num, den)),
                // Both sides vanish on points with a neutral factor (the
                // Fourier layer zeroes a full line there); the relation is
                // vacuous, not violated.
                (true, true) => {}
                // The scalings are invertible, so one-sided vanishing means
                // the supplied points are not honest ninth roots.
                _ => {
                    return Err(Error::ScalingUnderdetermined(
                        "an exceptional scaling relation is violated",
                    ))
                }
            }
        }
    }
    let mut vals: [Option<Fp2>; 5] = [None; 5];
    if let Some(first) = edges.first() {
        vals[first.0] = Some(fp.one());
    }
    let mut progressed = true;
    while progressed {
        progressed = false;
        for &(a, b, num, den) in &edges {
            let update = match (vals[a], vals[b]) {
                (Some(va), None) => {
                    // la / lb = num / den
                    let inv = num.inv_counted(ops).expect("checked nonzero");
                    vals[b] = Some(va.mul_counted(&den, ops).mul_counted(&inv, ops));
                    true
                }
                (None, Some(vb)) => {
                    let inv = den.inv_counted(ops).expect("checked nonzero");
                    vals[a] = Some(vb.mul_counted(&num, ops).mul_counted(&inv, ops));
                    true
                }
                _ => false,
            };
            progressed = progressed || update;
        }
    }
    if vals.iter().any(Option::is_none) {
        return Err(Error::ScalingUnderdetermined(
            "the usable scaling relations do not connect all five classes",
        ));
    }
    let vals = vals.map(|v| v.expect("solved above"));
    for &(a, b, num, den) in &edges {
        if vals[a].mul_counted(&den, ops) != vals[b].mul_counted(&num, ops) {
            return Err(Error::ScalingUnderdetermined(
                "exceptional scaling relations are inconsistent",
            ));
        }
    }
    Ok(P4::new(vals)
        .expect("scaling classes are nonzero")
        .normalized())
}

// ================================================================================
// Building the isogeny
// ================================================================================

/// A (3,3)-isogeny in the factored form `C_lambda . M33 . (.)^3 . S_K`.
#[derive(Clone, Debug)]
pub struct Isogeny33 {
    domain: HesseSurface,
    pre_transform: SurfaceTransform,
    transformed: HesseSurface,
    codomain: HesseSurface,
    lambda: P4,
    /// Pairs `(x, phi(x))` over the transformed domain, kept for the dual of
    /// the dual.
    forward_pins: Vec<(P8, P8)>,
    /// Pairs `(y, dual(y))` over the codomain, consumed by [`Isogeny33::dual`].
    reverse_pins: Vec<(P8, P8)>,
    build_ops: OpCounter,
}

/// Builds the isogeny with kernel `<3 r1, 3 r2>` from a kernel specification.
///
/// The kernel is normalized onto `K_2`, `lambda` is recovered generically or
/// through the exceptional relations, the codomain parameters are transported
/// (`t' = lambda * t~`, `d'` from `t'` or fitted from an aux point, `h'` from
/// the Hessian kernel), and finally the images of the supplied nine-torsion
/// points are checked against the translates they must land on.
pub fn build_isogeny(surface: &HesseSurface, spec: &KernelSpec) -> Result<Isogeny33> {
    let normalized = normalize_kernel(surface, spec)?;
    let moved = normalized.surface;
    let spec = normalized.spec;
    let mut ops = OpCounter::new();

    let profile = moved.exceptional_profile();
    let mut lambda = None;
    if !profile.exceptional {
        match lambda_generic_counted(&spec.r1, &spec.r2, &mut ops) {
            Ok(l) => lambda = Some(l),
            Err(Error::ScalingUnderdetermined(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let lambda = match lambda {
        Some(l) => l,
        None => {
            let (Some(r3), Some(r4)) = (&spec.r3, &spec.r4) else {
                return Err(Error::InvalidKernel(
                    "scaling recovery needs the sum and difference points",
                ));
            };
            lambda_exceptional_counted(&moved, [&spec.r1, &spec.r2, r3, r4], &mut ops)?
        }
    };
    assert!(
        lambda.coords().iter().all(|c| !c.is_zero()),
        "recovered scalings are invertible"
    );

    let t_new = star(&lambda, &t_tilde(moved.t()));
    let h_new = t_to_h(&t_new)?;
    let core = |x: &P8| scale_lambda(&lambda, &dft_point(&cube_map(x)));
    let d_new = match t_to_d(&t_new) {
        Ok(d) => d,
        Err(Error::DegenerateNeutral) => fit_d(spec.aux.iter().map(&core))?,
        Err(e) => return Err(e),
    };
    let codomain = HesseSurface::new(d_new, h_new, t_new)?;

    // phi(r_i) must land on three-torsion translates above the canonical
    // kernel directions.  The ninth roots r_i are only pinned up to adding a
    // three-torsion point, and such a shift moves the image by an element of
    // the dual kernel, so only the first two digits of the decomposition are
    // forced.
    let targets = [(1u8, 0u8), (0, 1), (1, 1), (1, 2)];
    let points = [Some(&spec.r1), Some(&spec.r2), spec.r3.as_ref(), spec.r4.as_ref()];
    let mut images = [None; 4];
    for ((point, target), image) in points.iter().zip(targets).zip(images.iter_mut()) {
        if let Some(r) = point {
            let img = core(r);
            let digits = codomain.decompose_torsion(&img).map_err(|_| {
                Error::InvalidKernel("nine-torsion points do not lie above the kernel")
            })?;
            if (digits.a, digits.b) != target {
                return Err(Error::InvalidKernel(
                    "nine-torsion points do not lie above the kernel",
                ));
            }
            *image = Some(img);
        }
    }

    let q1 = moved.torsion_point(&TorsionVector::new(0, 0, 1, 0));
    let q2 = moved.torsion_point(&TorsionVector::new(0, 0, 0, 1));
    let mut forward_pins = vec![
        (spec.r1, images[0].unwrap()),
        (spec.r2, images[1].unwrap()),
    ];
    let mut reverse_pins = vec![
        (forward_pins[0].1, q1),
        (forward_pins[1].1, q2),
    ];
    if let Some((x, tripled)) = &spec.witness {
        forward_pins.push((*x, core(x)));
        reverse_pins.push((core(x), *tripled));
    }
    for aux in &spec.aux {
        forward_pins.push((*aux, core(aux)));
    }

    Ok(Isogeny33 {
        domain: surface.clone(),
        pre_transform: normalized.transform,
        transformed: moved,
        codomain,
        lambda,
        forward_pins,
        reverse_pins,
        build_ops: ops,
    })
}

/// Applies `C_lambda`: coordinate `x_i` is scaled by its class entry.
fn scale_lambda(lambda: &P4, x: &P8) -> P8 {
    scale_lambda_counted(lambda, x, &mut OpCounter::new())
}

fn scale_lambda_counted(lambda: &P4, x: &P8, ops: &mut OpCounter) -> P8 {
    let one = x.params().one();
    let c = x.coords();
    let scaled = std::array::from_fn(|i| {
        let entry = lambda.coord(COORD_CLASS[i]);
        if entry == one {
            c[i]
        } else {
            c[i].mul_counted(&entry, ops)
        }
    });
    P8::new(scaled).expect("scalings are invertible")
}

/// Fits the codomain `d` from image samples when the neutral is degenerate.
///
/// The cubics have the shape `F_j = d_j * S - 3 d_0 * T_j`, so any point with
/// a nonzero cube sum `S` pins `d = (S : 3 T_1 : .. : 3 T_4)`.  Torsion
/// translates of the neutral all have `S = 0` in the degenerate case, which
/// is why a non-torsion sample is required.
fn fit_d(samples: impl Iterator<Item = P8>) -> Result<P4> {
    for y in samples {
        let (sum_cubes, triples) = cubic_parts(&y);
        if sum_cubes.is_zero() {
            continue;
        }
        let d = [
            sum_cubes,
            triples[0].mul_small(3),
            triples[1].mul_small(3),
            triples[2].mul_small(3),
            triples[3].mul_small(3),
        ];
        return P4::new(d).map_err(|_| Error::DegenerateNeutral);
    }
    Err(Error::DegenerateNeutral)
}

impl Isogeny33 {
    pub fn domain(&self) -> &HesseSurface {
        &self.domain
    }

    pub fn codomain(&self) -> &HesseSurface {
        &self.codomain
    }

    /// The symplectic move `S_K` applied before the cube-and-Fourier core.
    pub fn pre_transform(&self) -> &SurfaceTransform {
        &self.pre_transform
    }

    /// The domain after `S_K`, on which the kernel is `K_2`.
    pub fn transformed(&self) -> &HesseSurface {
        &self.transformed
    }

    /// The recovered codomain scaling, normalized to `lambda_4 = 1`.
    pub fn lambda(&self) -> &P4 {
        &self.lambda
    }

    /// Field operations spent on scaling recovery at build time.
    pub fn build_ops(&self) -> &OpCounter {
        &self.build_ops
    }

    pub fn evaluate(&self, x: &P8) -> Result<P8> {
        self.evaluate_counted(x, &mut OpCounter::new())
    }

    /// Evaluates the isogeny, recording field operations on `ops`.
    ///
    /// The core costs exactly nine cubings plus at most nine multiplications;
    /// the pre-transform and the Fourier layer are additions, subtractions
    /// and fixed root-of-unity scalings, which the counter does not track.
    pub fn evaluate_counted(&self, x: &P8, ops: &mut OpCounter) -> Result<P8> {
        if !self.domain.contains(x) {
            return Err(Error::NotOnVariety);
        }
        let moved = self.pre_transform.apply_point(x);
        let image = scale_lambda_counted(&self.lambda, &dft_point(&cube_map_counted(&moved, ops)), ops);
        debug_assert!(self.codomain.contains(&image));
        Ok(image)
    }

    /// The image of a 3-torsion translation under the isogeny.
    ///
    /// `K_1`-directions land on the codomain `K_2` with a sign flip; the
    /// kernel directions die.
    pub fn torsion_image(&self, v: &TorsionVector) -> TorsionVector {
        let w = self.pre_transform.torsion_action(v);
        TorsionVector::new(0, 0, 3 - w.a, 3 - w.b)
    }

    /// The dual isogeny `C_lambda' . M33 . (.)^3 . [-1]` from the codomain
    /// back to the transformed domain, with `dual . phi = [3]`.
    ///
    /// The scaling `lambda'` is read slot-wise from the neutral relation
    /// `t~_i = lambda'_i * a_i`, where `a` is the even part of the tripled
    /// neutral; classes invisible there (zero slots, as on product surfaces)
    /// are pinned through the stored image pairs, which requires a witness
    /// pair on the kernel specification.  The neutral relation is blind to
    /// signs and the bare core composes with `phi` to `[-3]`, so the dual
    /// carries an inversion as its pre-transform; the inversion commutes with
    /// the core and fixes both the neutral and the surface parameters.
    pub fn dual(&self) -> Result<Isogeny33> {
        let mut ops = OpCounter::new();
        let tripled = dft_point(&cube_map_counted(
            &scale_lambda_counted(
                &self.lambda,
                &dft_point(&cube_map_counted(&self.transformed.neutral(), &mut ops)),
                &mut ops,
            ),
            &mut ops,
        ));
        let a = even_part(&tripled).ok_or(Error::DegenerateDual(
            "the tripled neutral is not an even vector",
        ))?;
        let t = self.transformed.t();
        let mut vals: [Option<Fp2>; 5] = [None; 5];
        for i in 0..5 {
            match (t.coord(i).is_zero(), a.coord(i).is_zero()) {
                (false, false) => {
                    let inv = a.coord(i).inv_counted(&mut ops).expect("checked nonzero");
                    vals[i] = Some(t.coord(i).mul_counted(&inv, &mut ops));
                }
                (true, true) => {}
                _ => {
                    return Err(Error::DegenerateDual(
                        "support mismatch between the neutral and the tripled neutral",
                    ))
                }
            }
        }
        let mut pending = Vec::new();
        for (y, z) in &self.reverse_pins {
            pending.push(pin_ratios(y, z, &mut ops)?);
        }
        let mut progressed = true;
        while progressed {
            progressed = false;
            let mut rest = Vec::new();
            for ratios in pending {
                let anchor = (0..5).find(|&c| ratios[c].is_some() && vals[c].is_some());
                let Some(c0) = anchor else {
                    rest.push(ratios);
                    continue;
                };
                let mu = vals[c0].expect("anchor is pinned")
                    * ratios[c0].expect("anchor is covered").inv().expect("nonzero ratio");
                for c in 0..5 {
                    if let Some(r) = ratios[c] {
                        let pinned = mu.mul_counted(&r, &mut ops);
                        match vals[c] {
                            None => vals[c] = Some(pinned),
                            Some(prev) => {
                                if prev != pinned {
                                    return Err(Error::DegenerateDual(
                                        "witness relations disagree",
                                    ));
                                }
                            }
                        }
                    }
                }
                progressed = true;
            }
            pending = rest;
        }
        if vals.iter().any(Option::is_none) {
            return Err(Error::DegenerateDual(
                "scaling classes remain unpinned; supply a witness pair",
            ));
        }
        let lambda = P4::new(vals.map(|v| v.expect("pinned above")))
            .expect("dual scalings are nonzero")
            .normalized();
        let mut pre_transform = SurfaceTransform::identity(&self.domain.params());
        pre_transform.push(SurfaceMove::Negate);
        let transformed = pre_transform.apply_surface(&self.codomain);
        Ok(Isogeny33 {
            domain: self.codomain.clone(),
            pre_transform,
            transformed,
            codomain: self.transformed.clone(),
            lambda,
            forward_pins: self.reverse_pins.clone(),
            reverse_pins: self.forward_pins.clone(),
            build_ops: ops,
        })
    }
}

/// Per-class ratios `z_i / (M33((-y)^3))_i` imposed by one image pair, each
/// defined up to the pair's projective scalar.
fn pin_ratios(y: &P8, z: &P8, ops: &mut OpCounter) -> Result<[Option<Fp2>; 5]> {
    let w = dft_point(&cube_map_counted(&negate_point(y), ops));
    let mut out: [Option<Fp2>; 5] = [None; 5];
    for i in 0..9 {
        let wc = w.coord(i);
        let zc = z.coord(i);
        match (wc.is_zero(), zc.is_zero()) {
            (false, false) => {
                let ratio = zc.mul_counted(&wc.inv_counted(ops).expect("checked nonzero"), ops);
                let class = COORD_CLASS[i];
                match out[class] {
                    None => out[class] = Some(ratio),
                    Some(prev) => {
                        if prev != ratio {
                            return Err(Error::DegenerateDual(
                                "an image pair is inconsistent across coordinates",
                            ));
                        }
                    }
                }
            }
            (true, true) => {}
            _ => {
                return Err(Error::DegenerateDual(
                    "an image pair does not lie on the dual graph",
                ))
            }
        }
    }
    Ok(out)
}

// ================================================================================
// Multiplication by three
// ================================================================================

/// Computes `[3] x` as `S_K^-1 . dual . phi . (point)`, using the isogeny
/// with the supplied kernel and its dual.
pub fn triple(surface: &HesseSurface, x: &P8, spec: &KernelSpec) -> Result<P8> {
    let phi = build_isogeny(surface, spec)?;
    let dual = phi.dual()?;
    let tripled = dual.evaluate(&phi.evaluate(x)?)?;
    Ok(phi.pre_transform().inverse().apply_point(&tripled))
}

// ================================================================================
// Tests
// ================================================================================
