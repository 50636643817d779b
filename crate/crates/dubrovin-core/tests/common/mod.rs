//! Shared fixtures: the worked numeric examples (genus-2 hyperelliptic and
//! the Trott quartic) with their period data, printed solution constants,
//! and the closed-form generator lists.

#![allow(dead_code)]

use dubrovin::curvefield::{holomorphic_basis, PlaneCurve};
use dubrovin::exactalg::{rat, rat_int, rational_to_f64, Rational, VarTable, WPoly};
use dubrovin::linalg::Mat;
use dubrovin::param::{lift_canonical, DubrovinParam};
use dubrovin::theta::RiemannMatrix;
use num_complex::Complex64 as C;
use std::f64::consts::PI;
use std::sync::Arc;

pub fn c64(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn xy_poly(terms: Vec<((u32, u32), i64)>) -> WPoly<Rational> {
    WPoly::from_terms(
        VarTable::xy(),
        terms
            .into_iter()
            .map(|((i, j), c)| (vec![i, j], rat_int(c)))
            .collect(),
    )
}

/// y^2 = x^6 - 1 with the `1/sqrt(F)` basis (numerators 2, 2x over f_y = 2y).
pub fn running_param() -> DubrovinParam {
    let c = PlaneCurve::hyperelliptic(&[
        rat_int(-1),
        rat_int(0),
        rat_int(0),
        rat_int(0),
        rat_int(0),
        rat_int(0),
        rat_int(1),
    ])
    .unwrap();
    let nums = vec![xy_poly(vec![((0, 0), 2)]), xy_poly(vec![((1, 0), 2)])];
    let basis = holomorphic_basis(&c, &nums).unwrap();
    lift_canonical(&c, &basis).unwrap()
}

/// Generic hyperelliptic parametrization for `y^2 = F(x)` given the seven
/// coefficients of `F` (constant first).
pub fn hyperelliptic_param(coeffs: &[Rational]) -> DubrovinParam {
    let c = PlaneCurve::hyperelliptic(coeffs).unwrap();
    let nums = vec![xy_poly(vec![((0, 0), 2)]), xy_poly(vec![((1, 0), 2)])];
    let basis = holomorphic_basis(&c, &nums).unwrap();
    lift_canonical(&c, &basis).unwrap()
}

/// The five minimal generators of the running example's prime ideal
/// (degrees 5, 5, 8, 9, 10), over `u1 u2 v1 v2 w1 w2`.
pub fn running_generators() -> Vec<WPoly<Rational>> {
    let t = VarTable::uvw(2);
    let mk = |terms: Vec<(Vec<u32>, i64)>| {
        WPoly::from_terms(
            t.clone(),
            terms.into_iter().map(|(e, c)| (e, rat_int(c))).collect(),
        )
    };
    let p1 = mk(vec![
        (vec![5, 0, 0, 0, 0, 0], 3),
        (vec![0, 2, 0, 0, 1, 0], 2),
        (vec![1, 1, 0, 0, 0, 1], -2),
        (vec![1, 0, 0, 2, 0, 0], 3),
        (vec![0, 1, 1, 1, 0, 0], -3),
    ]);
    let p2 = mk(vec![
        (vec![0, 5, 0, 0, 0, 0], 3),
        (vec![2, 0, 0, 0, 0, 1], -2),
        (vec![1, 1, 0, 0, 1, 0], 2),
        (vec![0, 1, 2, 0, 0, 0], -3),
        (vec![1, 0, 1, 1, 0, 0], 3),
    ]);
    let p3 = mk(vec![
        (vec![4, 4, 0, 0, 0, 0], 9),
        (vec![4, 0, 2, 0, 0, 0], -9),
        (vec![0, 4, 0, 2, 0, 0], 9),
        (vec![0, 2, 0, 0, 2, 0], -4),
        (vec![1, 1, 0, 0, 1, 1], 8),
        (vec![2, 0, 0, 0, 0, 2], -4),
    ]);
    let p4 = mk(vec![
        (vec![3, 4, 1, 0, 0, 0], 9),
        (vec![3, 0, 3, 0, 0, 0], -9),
        (vec![4, 3, 0, 1, 0, 0], 9),
        (vec![0, 3, 0, 3, 0, 0], 9),
        (vec![4, 0, 1, 0, 1, 0], 6),
        (vec![0, 4, 0, 1, 0, 1], -6),
        (vec![0, 1, 0, 1, 2, 0], -4),
        (vec![0, 1, 1, 0, 1, 1], 4),
        (vec![1, 0, 0, 1, 1, 1], 4),
        (vec![1, 0, 1, 0, 0, 2], -4),
    ]);
    let p5 = mk(vec![
        (vec![2, 4, 2, 0, 0, 0], 9),
        (vec![2, 0, 4, 0, 0, 0], -9),
        (vec![3, 3, 1, 1, 0, 0], 9),
        (vec![4, 2, 0, 2, 0, 0], 9),
        (vec![0, 2, 0, 4, 0, 0], 9),
        (vec![4, 0, 0, 0, 2, 0], -4),
        (vec![0, 4, 0, 0, 0, 2], 4),
        (vec![3, 4, 0, 0, 1, 0], -6),
        (vec![3, 0, 2, 0, 1, 0], 12),
        (vec![4, 3, 0, 0, 0, 1], -6),
        (vec![0, 3, 0, 2, 0, 1], -12),
        (vec![0, 0, 0, 2, 2, 0], -4),
        (vec![0, 0, 1, 1, 1, 1], 8),
        (vec![0, 0, 2, 0, 0, 2], -4),
    ]);
    vec![p1, p2, p3, p4, p5]
}

/// The Trott quartic as a ternary form, in the chart where the affine
/// curve is `(x, y) = (u1/u3, u2/u3)`:
/// `144(u1^4+u2^4) + 350 u1^2 u2^2 - 225(u1^2+u2^2)u3^2 + 81 u3^4`.
pub fn trott_quartic() -> WPoly<Rational> {
    let t = VarTable::u_only(3);
    WPoly::from_terms(
        t,
        vec![
            (vec![4, 0, 0], rat_int(144)),
            (vec![0, 4, 0], rat_int(144)),
            (vec![2, 2, 0], rat_int(350)),
            (vec![2, 0, 2], rat_int(-225)),
            (vec![0, 2, 2], rat_int(-225)),
            (vec![0, 0, 4], rat_int(81)),
        ],
    )
}

/// The Trott curve `144(x^4+y^4) - 225(x^2+y^2) + 350 x^2 y^2 + 81 = 0`.
pub fn trott_curve() -> Arc<PlaneCurve> {
    PlaneCurve::new(xy_poly(vec![
        ((4, 0), 144),
        ((0, 4), 144),
        ((2, 0), -225),
        ((0, 2), -225),
        ((2, 2), 350),
        ((0, 0), 81),
    ]))
    .unwrap()
}

/// Trott parametrization with numerators `(x, y, 1)`, the ordering under
/// which the ternary form above vanishes on the canonical image.
pub fn trott_param() -> DubrovinParam {
    let c = trott_curve();
    let nums = vec![
        xy_poly(vec![((1, 0), 1)]),
        xy_poly(vec![((0, 1), 1)]),
        xy_poly(vec![((0, 0), 1)]),
    ];
    let basis = holomorphic_basis(&c, &nums).unwrap();
    lift_canonical(&c, &basis).unwrap()
}

/// The six relations satisfied by the Trott parametrization
/// (three cubics and three quartics), over `u1..u3, v1..v3, w1..w3`.
pub fn sixfortrott() -> Vec<WPoly<Rational>> {
    let t = VarTable::uvw(3);
    let mk = |terms: Vec<(Vec<u32>, i64)>| {
        WPoly::from_terms(
            t.clone(),
            terms.into_iter().map(|(e, c)| (e, rat_int(c))).collect(),
        )
    };
    vec![
        // 450 u1^2 u3 + 450 u2^2 u3 - 324 u3^3 + u2 v1 - u1 v2
        mk(vec![
            (vec![2, 0, 1, 0, 0, 0, 0, 0, 0], 450),
            (vec![0, 2, 1, 0, 0, 0, 0, 0, 0], 450),
            (vec![0, 0, 3, 0, 0, 0, 0, 0, 0], -324),
            (vec![0, 1, 0, 1, 0, 0, 0, 0, 0], 1),
            (vec![1, 0, 0, 0, 1, 0, 0, 0, 0], -1),
        ]),
        // 700 u1^2 u2 + 576 u2^3 - 450 u2 u3^2 + u3 v1 - u1 v3
        mk(vec![
            (vec![2, 1, 0, 0, 0, 0, 0, 0, 0], 700),
            (vec![0, 3, 0, 0, 0, 0, 0, 0, 0], 576),
            (vec![0, 1, 2, 0, 0, 0, 0, 0, 0], -450),
            (vec![0, 0, 1, 1, 0, 0, 0, 0, 0], 1),
            (vec![1, 0, 0, 0, 0, 1, 0, 0, 0], -1),
        ]),
        // 576 u1^3 + 700 u1 u2^2 - 450 u1 u3^2 - u3 v2 + u2 v3
        mk(vec![
            (vec![3, 0, 0, 0, 0, 0, 0, 0, 0], 576),
            (vec![1, 2, 0, 0, 0, 0, 0, 0, 0], 700),
            (vec![1, 0, 2, 0, 0, 0, 0, 0, 0], -450),
            (vec![0, 0, 1, 0, 1, 0, 0, 0, 0], -1),
            (vec![0, 1, 0, 0, 0, 1, 0, 0, 0], 1),
        ]),
        // 450 u1 u3 v1 + 450 u2 u3 v2 + 225 u1^2 v3 + 225 u2^2 v3
        //  - 486 u3^2 v3 + u2 w1 - u1 w2
        mk(vec![
            (vec![1, 0, 1, 1, 0, 0, 0, 0, 0], 450),
            (vec![0, 1, 1, 0, 1, 0, 0, 0, 0], 450),
            (vec![2, 0, 0, 0, 0, 1, 0, 0, 0], 225),
            (vec![0, 2, 0, 0, 0, 1, 0, 0, 0], 225),
            (vec![0, 0, 2, 0, 0, 1, 0, 0, 0], -486),
            (vec![0, 1, 0, 0, 0, 0, 1, 0, 0], 1),
            (vec![1, 0, 0, 0, 0, 0, 0, 1, 0], -1),
        ]),
        // 700 u1 u2 v1 + 350 u1^2 v2 + 864 u2^2 v2 - 225 u3^2 v2
        //  - 450 u2 u3 v3 + u3 w1 - u1 w3
        mk(vec![
            (vec![1, 1, 0, 1, 0, 0, 0, 0, 0], 700),
            (vec![2, 0, 0, 0, 1, 0, 0, 0, 0], 350),
            (vec![0, 2, 0, 0, 1, 0, 0, 0, 0], 864),
            (vec![0, 0, 2, 0, 1, 0, 0, 0, 0], -225),
            (vec![0, 1, 1, 0, 0, 1, 0, 0, 0], -450),
            (vec![0, 0, 1, 0, 0, 0, 1, 0, 0], 1),
            (vec![1, 0, 0, 0, 0, 0, 0, 0, 1], -1),
        ]),
        // 864 u1^2 v1 + 350 u2^2 v1 - 225 u3^2 v1 + 700 u1 u2 v2
        //  - 450 u1 u3 v3 - u3 w2 + u2 w3
        mk(vec![
            (vec![2, 0, 0, 1, 0, 0, 0, 0, 0], 864),
            (vec![0, 2, 0, 1, 0, 0, 0, 0, 0], 350),
            (vec![0, 0, 2, 1, 0, 0, 0, 0, 0], -225),
            (vec![1, 1, 0, 0, 1, 0, 0, 0, 0], 700),
            (vec![1, 0, 1, 0, 0, 1, 0, 0, 0], -450),
            (vec![0, 0, 1, 0, 0, 0, 0, 1, 0], -1),
            (vec![0, 1, 0, 0, 0, 0, 0, 0, 1], 1),
        ]),
    ]
}

/// Riemann matrix of the genus-2 example: `(2 pi / sqrt 3) [[-2, 1], [1, -2]]`.
pub fn b2_paper() -> RiemannMatrix {
    let s = 2.0 * PI / 3.0f64.sqrt();
    RiemannMatrix::new(
        2,
        vec![c64(-2.0 * s, 0.0), c64(s, 0.0), c64(s, 0.0), c64(-2.0 * s, 0.0)],
    )
    .unwrap()
}

/// Period matrix `Pi_a` of the genus-2 example (printed values).
pub fn pia_g2() -> Mat {
    Mat::from_rows(vec![
        vec![c64(0.0, 1.2143253), c64(1.0516366, 0.6071627)],
        vec![c64(-1.2143253, 0.0), c64(-0.6071627, -1.0516366)],
    ])
}

/// Printed two-phase solution data of the genus-2 example at the curve
/// point `(2, sqrt 63)`: vectors as printed (these carry the
/// algebraic-geometry scaling; multiply by `2 pi i` for the theta
/// convention used here) plus the printed constants `(c, d)`.
pub fn printed_g2_point() -> (Vec<C>, Vec<C>, Vec<C>, C, C) {
    (
        vec![c64(0.133702, 0.111777), c64(-0.059901, -0.119802)],
        vec![c64(-0.151861, -0.140376), c64(0.091278, 0.122654)],
        vec![c64(0.131964, 0.13077), c64(-0.094538, -0.09780)],
        c64(0.02546003, 0.15991389),
        c64(0.00437723, 0.00078777),
    )
}

/// The four printed Dubrovin quartics of the genus-2 example, in the
/// algebraic-geometry variable scaling (apply [`ag_scale`] to computed
/// quartics before comparing). Table `u1 u2 v1 v2 w1 w2 c d`.
pub fn printed_g2_quartics() -> Vec<WPoly<C>> {
    let t = VarTable::uvwcd(2);
    let mk = |terms: Vec<(Vec<u32>, f64)>| {
        let mut p = WPoly::zero(t.clone());
        for (e, v) in terms {
            p.add_term(e, c64(v, 0.0));
        }
        p
    };
    let q1 = mk(vec![
        (vec![4, 0, 0, 0, 0, 0, 0, 0], 4.4044247813),
        (vec![3, 1, 0, 0, 0, 0, 0, 0], 8.80884956304),
        (vec![2, 2, 0, 0, 0, 0, 0, 0], 13.21327434456),
        (vec![1, 3, 0, 0, 0, 0, 0, 0], 8.80884956304),
        (vec![0, 4, 0, 0, 0, 0, 0, 0], 4.4044247813),
        (vec![2, 0, 0, 0, 0, 0, 1, 0], -0.1673475726606),
        (vec![1, 1, 0, 0, 0, 0, 1, 0], -0.167347572669),
        (vec![0, 2, 0, 0, 0, 0, 1, 0], -0.16734757266),
        (vec![1, 0, 0, 0, 1, 0, 0, 0], 0.11156504844),
        (vec![1, 0, 0, 0, 0, 1, 0, 0], 0.055782524223),
        (vec![0, 1, 0, 0, 1, 0, 0, 0], 0.055782524223),
        (vec![0, 1, 0, 0, 0, 1, 0, 0], 0.111565048440),
        (vec![0, 0, 2, 0, 0, 0, 0, 0], -0.083673786330),
        (vec![0, 0, 1, 1, 0, 0, 0, 0], -0.08367378633),
        (vec![0, 0, 0, 2, 0, 0, 0, 0], -0.0836737863),
        (vec![0, 0, 0, 0, 0, 0, 0, 1], 1.0042389593),
    ]);
    let q2 = mk(vec![
        (vec![4, 0, 0, 0, 0, 0, 0, 0], 13.5267575687),
        (vec![3, 1, 0, 0, 0, 0, 0, 0], 27.053515137),
        (vec![2, 2, 0, 0, 0, 0, 0, 0], 20.4046553367),
        (vec![1, 3, 0, 0, 0, 0, 0, 0], 6.877897768),
        (vec![0, 4, 0, 0, 0, 0, 0, 0], 32.6563192498),
        (vec![2, 0, 0, 0, 0, 0, 1, 0], -0.51395499447),
        (vec![1, 1, 0, 0, 0, 0, 1, 0], -0.51395499447),
        (vec![0, 2, 0, 0, 0, 0, 1, 0], -4.95646510162),
        (vec![1, 0, 0, 0, 1, 0, 0, 0], 0.34263666298),
        (vec![1, 0, 0, 0, 0, 1, 0, 0], 0.171318331491),
        (vec![0, 1, 0, 0, 1, 0, 0, 0], 0.171318331491),
        (vec![0, 1, 0, 0, 0, 1, 0, 0], 3.30431006774),
        (vec![0, 0, 2, 0, 0, 0, 0, 0], -0.256977497237),
        (vec![0, 0, 1, 1, 0, 0, 0, 0], -0.256977497237),
        (vec![0, 0, 0, 2, 0, 0, 0, 0], -2.47823255081),
        (vec![0, 0, 0, 0, 0, 0, 0, 1], 0.33474631977),
    ]);
    let q3 = mk(vec![
        (vec![4, 0, 0, 0, 0, 0, 0, 0], 32.6563192498),
        (vec![3, 1, 0, 0, 0, 0, 0, 0], 6.87789776801),
        (vec![2, 2, 0, 0, 0, 0, 0, 0], 20.4046553367),
        (vec![1, 3, 0, 0, 0, 0, 0, 0], 27.053515137),
        (vec![0, 4, 0, 0, 0, 0, 0, 0], 13.5267575687),
        (vec![2, 0, 0, 0, 0, 0, 1, 0], -4.9564651016),
        (vec![1, 1, 0, 0, 0, 0, 1, 0], -0.513954994),
        (vec![0, 2, 0, 0, 0, 0, 1, 0], -0.51395499447),
        (vec![1, 0, 0, 0, 1, 0, 0, 0], 3.3043100677),
        (vec![1, 0, 0, 0, 0, 1, 0, 0], 0.17131833149),
        (vec![0, 1, 0, 0, 1, 0, 0, 0], 0.171318331491),
        (vec![0, 1, 0, 0, 0, 1, 0, 0], 0.342636663),
        (vec![0, 0, 2, 0, 0, 0, 0, 0], -2.4782325508),
        (vec![0, 0, 1, 1, 0, 0, 0, 0], -0.2569774972370),
        (vec![0, 0, 0, 2, 0, 0, 0, 0], -0.2569774972369),
        (vec![0, 0, 0, 0, 0, 0, 0, 1], 0.334746319778),
    ]);
    let q4 = mk(vec![
        (vec![4, 0, 0, 0, 0, 0, 0, 0], 32.6563192505),
        (vec![3, 1, 0, 0, 0, 0, 0, 0], 123.7473792),
        (vec![2, 2, 0, 0, 0, 0, 0, 0], 195.7088775358),
        (vec![1, 3, 0, 0, 0, 0, 0, 0], 123.7473792),
        (vec![0, 4, 0, 0, 0, 0, 0, 0], 32.6563192505),
        (vec![2, 0, 0, 0, 0, 0, 1, 0], -4.9564651017),
        (vec![1, 1, 0, 0, 0, 0, 1, 0], -9.398975209),
        (vec![0, 2, 0, 0, 0, 0, 1, 0], -4.9564651017),
        (vec![1, 0, 0, 0, 1, 0, 0, 0], 3.30431006782),
        (vec![1, 0, 0, 0, 0, 1, 0, 0], 3.132991736),
        (vec![0, 1, 0, 0, 1, 0, 0, 0], 3.132991736),
        (vec![0, 1, 0, 0, 0, 1, 0, 0], 3.30431006782),
        (vec![0, 0, 2, 0, 0, 0, 0, 0], -2.47823255087),
        (vec![0, 0, 1, 1, 0, 0, 0, 0], -4.699487604),
        (vec![0, 0, 0, 2, 0, 0, 0, 0], -2.47823255086),
        (vec![0, 0, 0, 0, 0, 0, 0, 1], 0.334746319778),
    ]);
    vec![q1, q2, q3, q4]
}

/// Rescale a quartic/quintic from the theta-convention variables to the
/// printed (algebraic-geometry) ones: each coefficient is multiplied by
/// `(2 pi i)^k` with `k` the total degree of the term in the `u, v, w`
/// block (`c` and `d` are untouched).
pub fn ag_scale(p: &WPoly<C>) -> WPoly<C> {
    let tpi = c64(0.0, 2.0 * PI);
    let nvars = p.vars().len();
    let names = p.vars().names();
    let uvw_count = names
        .iter()
        .filter(|n| n.starts_with('u') || n.starts_with('v') || n.starts_with('w'))
        .count();
    let mut out = WPoly::zero(p.vars().clone());
    for (e, c) in p.terms() {
        let k: u32 = e[..uvw_count].iter().sum();
        let mut f = *c;
        for _ in 0..k {
            f *= tpi;
        }
        out.add_term(e.clone(), f);
    }
    let _ = nvars;
    out
}

/// Trott Riemann matrix (printed: `-2 pi M` with `M` as displayed).
pub fn trott_b() -> RiemannMatrix {
    let m = [
        [1.57412534343470, -0.671587878369476, -0.230949586695748],
        [-0.671587878369476, 1.57412534206005, -0.671587878369476],
        [-0.230949586695747, -0.671587878369476, 1.57412534343470],
    ];
    let mut entries = Vec::with_capacity(9);
    for row in &m {
        for &v in row {
            entries.push(c64(-2.0 * PI * v, 0.0));
        }
    }
    // symmetrize the last-digit difference in the printed matrix
    let avg = 0.5 * (entries[2].re + entries[6].re);
    entries[2] = c64(avg, 0.0);
    entries[6] = c64(avg, 0.0);
    RiemannMatrix::new(3, entries).unwrap()
}

/// Trott period matrix `Pi_a` (printed, purely imaginary).
pub fn trott_pia() -> Mat {
    let m = [
        [0.01384015942, 0.02768031884, 0.01384015942],
        [0.01384015941, 0.0, -0.01384015941],
        [0.02348847438, 0.0, 0.02348847438],
    ];
    Mat::from_rows(
        m.iter()
            .map(|row| row.iter().map(|&v| c64(0.0, v)).collect())
            .collect(),
    )
}

/// The quartic recovered from the Trott theta constants (printed), over
/// `u1, u2, u3`.
pub fn secret_trott() -> WPoly<C> {
    let t = VarTable::u_only(3);
    let terms: Vec<(Vec<u32>, f64)> = vec![
        (vec![4, 0, 0], -0.04216205642716586),
        (vec![3, 1, 0], 0.12240048937276882),
        (vec![3, 0, 1], -0.29104871408187094),
        (vec![2, 2, 0], -6.8912949529273355),
        (vec![2, 1, 1], 17.414377754001833),
        (vec![2, 0, 2], -7.511468695367071),
        (vec![1, 3, 0], -14.027390884600191),
        (vec![1, 2, 1], 3.264586380028863),
        (vec![1, 1, 2], 17.414377754001833),
        (vec![1, 0, 3], -0.29104871408187094),
        (vec![0, 4, 0], -7.013695442300095),
        (vec![0, 3, 1], -14.027390884600202),
        (vec![0, 2, 2], -6.891294952927339),
        (vec![0, 1, 3], 0.12240048937276349),
        (vec![0, 0, 4], -0.04216205642716675),
    ];
    let mut p = WPoly::zero(t);
    for (e, v) in terms {
        p.add_term(e, c64(v, 0.0));
    }
    p
}

/// The printed point of the Trott threefold at the curve point `(0, 1)`:
/// `(U~, V~, W~)` as exact rationals in the `(x, y, 1)` numerator order.
pub fn trott_point_exact() -> (Vec<Rational>, Vec<Rational>, Vec<Rational>) {
    (
        vec![rat_int(0), rat(-1, 126), rat(-1, 126)],
        vec![rat(-1, 126), rat_int(0), rat_int(0)],
        vec![rat_int(0), rat(-1550, 55566), rat(-1325, 37044)],
    )
}

/// Evaluate a rational polynomial at a numeric point.
pub fn eval_poly_f64(p: &WPoly<Rational>, vals: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (e, c) in p.terms() {
        let mut t = rational_to_f64(c);
        for (i, &k) in e.iter().enumerate() {
            t *= vals[i].powi(k as i32);
        }
        acc += t;
    }
    acc
}

/// Numeric evaluation of the (uncleared) parametrization at a real curve
/// point: returns `(U~, V~, W~)` as complex vectors.
pub fn eval_param_at(param: &DubrovinParam, x: f64, y: f64) -> (Vec<C>, Vec<C>, Vec<C>) {
    let g = param.genus();
    let ev = |e: &dubrovin::curvefield::CurveElem| -> C {
        let n = eval_poly_f64(e.num(), &[x, y]);
        let d = eval_poly_f64(e.den(), &[x, y]);
        c64(n / d, 0.0)
    };
    let u = (0..g).map(|i| ev(&param.u_elem(i))).collect();
    let v = (0..g).map(|i| ev(&param.v_elem(i))).collect();
    let w = (0..g).map(|i| ev(&param.w_elem(i))).collect();
    (u, v, w)
}

/// Deterministic random rational in `[-bound, bound]` with small
/// denominator.
pub fn random_rational(rng: &mut dubrovin::SplitMix64, bound: i64) -> Rational {
    rat(rng.next_in(-bound, bound), rng.next_in(1, 4))
}
