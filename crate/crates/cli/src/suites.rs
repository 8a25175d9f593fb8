//! Named verification suites. Each case draws its inputs from its own
//! generator stream, so cases run in parallel and replay independently.

use rayon::prelude::*;
use serde_json::{json, Value};

use dercat_core::complex::{
    cocylinder, cone, cylinder, h_pullback, h_pushout, homology, homotopy_inverse, is_acyclic, is_quasi_iso,
    quasi_iso_by_cone, quasi_iso_by_homology, shift, solve_homotopy, ChainMap, Complex,
};
use dercat_core::derived::{derived_hom, lift_arrow_representative, strictify_square, DerivedHomGroup};
use dercat_core::diagram::{
    diagram_to_filtration, is_cocartesian, pushout_comparison, pushout_complete, split_mono_violation, Poset,
};
use dercat_core::gen::{Gen, Sizes};
use dercat_core::json::{
    chain_map_to_json, complex_to_json, diagram_to_json, ext_to_json, filtration_to_json, homotopy_to_json,
};
use dercat_core::k_theory::{additivity_k0, k0_complex, pairing_k0};
use dercat_core::linalg::is_admissible_mono;
use dercat_core::sconst::{ext_q, ext_s, ext_t, forget_quotients, from_filtration, SnObject};
use dercat_core::{Mat, Ring};

use crate::config::{CliError, RunConfig};
use crate::report::{digest, digest_bytes, error_witness, CheckRecord};

pub const SUITES: &[&str] = &[
    "homotopy-limits",
    "pullback-quasi-iso",
    "quasi-iso-coherence",
    "strictification",
    "van",
    "filtration",
    "s-construction",
    "additivity",
    "derived-hom",
    "pairing",
    "all",
];

/// The checks of one generated input.
struct Case {
    prefix: String,
    inputs: String,
    records: Vec<CheckRecord>,
}

impl Case {
    fn new(prefix: String, inputs: &Value) -> Case {
        Case { prefix, inputs: digest(inputs), records: Vec::new() }
    }

    fn check(&mut self, what: &str, pass: bool, witness: impl FnOnce() -> Value) {
        self.records.push(CheckRecord {
            check: format!("{}/{what}", self.prefix),
            inputs: self.inputs.clone(),
            pass,
            witness: if pass { None } else { Some(witness()) },
        });
    }

    /// Records a failure for `Err` and hands back the value otherwise.
    fn ok<T>(&mut self, what: &str, r: dercat_core::Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(what, false, || error_witness(&e));
                None
            }
        }
    }

    fn complex(&mut self, what: &str, c: &Complex) {
        let r = c.check();
        self.check(what, r.is_ok(), || error_witness(&r.unwrap_err()));
    }

    fn chain_maps(&mut self, what: &str, maps: &[&ChainMap]) {
        let bad = maps.iter().enumerate().find_map(|(i, f)| f.chain_defect().map(|d| (i, d)));
        self.check(what, bad.is_none(), || {
            let (i, degree) = bad.unwrap();
            json!({ "map": i, "degree": degree })
        });
    }

    fn equal<T: PartialEq + std::fmt::Debug>(&mut self, what: &str, a: &T, b: &T) {
        self.check(what, a == b, || json!({ "left": format!("{a:?}"), "right": format!("{b:?}") }));
    }

    fn done(self) -> Vec<CheckRecord> {
        self.records
    }
}

fn stream(suite: &str, label: &str, i: usize) -> u64 {
    let h = digest_bytes(format!("{suite}/{label}/{i}").as_bytes());
    u64::from_str_radix(&h[..16], 16).expect("hex")
}

fn gen_for(config: &RunConfig, sizes: Sizes, suite: &str, label: &str, i: usize) -> Gen {
    Gen::with_stream(config.seed, stream(suite, label, i), config.ring, sizes)
}

/// Smaller sizes for suites whose constructions nest several cylinders.
fn capped(sizes: Sizes, rank: usize, span: i32) -> Sizes {
    Sizes { max_rank: sizes.max_rank.min(rank), lo: sizes.lo, hi: sizes.hi.min(sizes.lo + span) }
}

fn cases<F>(count: usize, f: F) -> Vec<CheckRecord>
where
    F: Fn(usize) -> Vec<CheckRecord> + Sync + Send,
{
    (0..count).into_par_iter().flat_map_iter(f).collect()
}

pub fn run_suite(config: &RunConfig) -> Result<Vec<CheckRecord>, CliError> {
    run_named(&config.suite, config)
}

fn run_named(name: &str, config: &RunConfig) -> Result<Vec<CheckRecord>, CliError> {
    Ok(match name {
        "homotopy-limits" => homotopy_limits(config, 200),
        "pullback-quasi-iso" => pullback_quasi_iso(config, 100),
        "quasi-iso-coherence" => quasi_iso_coherence(config, 200),
        "strictification" => strictification(config, 50),
        "van" => van(config, 50),
        "filtration" => filtration(config, 50),
        "s-construction" => s_construction(config, 30, 10),
        "additivity" => additivity(config, 50),
        "derived-hom" => derived_hom_suite(config, 20),
        "pairing" => pairing(config, 100),
        "all" => {
            let mut out = Vec::new();
            for s in SUITES.iter().filter(|s| **s != "all") {
                out.extend(run_named(s, config)?);
            }
            out
        }
        other => return Err(CliError::Usage(format!("unknown suite {other:?}"))),
    })
}

/// Complexes, maps and witnesses of the homotopy pullback and pushout,
/// cone, cylinder and cocylinder.
pub fn homotopy_limits(config: &RunConfig, count: usize) -> Vec<CheckRecord> {
    const SUITE: &str = "homotopy-limits";
    cases(count, |i| {
        let mut g = gen_for(config, config.sizes, SUITE, "", i);
        let (a, b, c) = (g.complex(), g.complex(), g.complex());
        let f = g.chain_map(&a, &c);
        let h = g.chain_map(&b, &c);
        let p = g.chain_map(&a, &b);
        let inputs = json!([chain_map_to_json(&f), chain_map_to_json(&h), chain_map_to_json(&p)]);
        let mut case = Case::new(format!("{SUITE}/{i:03}"), &inputs);

        if let Some(pb) = case.ok("pullback", h_pullback(&f, &h)) {
            case.complex("pullback-d2", &pb.complex);
            case.chain_maps("pullback-legs", &[&pb.f_prime, &pb.g_prime]);
            let ends = h.compose(&pb.f_prime).and_then(|x| Ok((x, f.compose(&pb.g_prime)?)));
            if let Some((left, right)) = case.ok("pullback-witness", ends) {
                case.check("pullback-witness", pb.witness.witnesses(&left, &right), || homotopy_to_json(&pb.witness));
            }
        }
        if let Some(po) = case.ok("pushout", h_pushout(&p, &f)) {
            case.complex("pushout-d2", &po.complex);
            case.chain_maps("pushout-legs", &[&po.inj_f, &po.inj_g]);
            let ends = po.inj_f.compose(&p).and_then(|x| Ok((x, po.inj_g.compose(&f)?)));
            if let Some((left, right)) = case.ok("pushout-witness", ends) {
                case.check("pushout-witness", po.witness.witnesses(&left, &right), || homotopy_to_json(&po.witness));
            }
        }

        let cn = cone(&f);
        case.complex("cone-d2", &cn);
        let (chi_cone, chi_diff) = (k0_complex(&cn).0, k0_complex(&c).0 - k0_complex(&a).0);
        case.equal("cone-euler", &chi_cone, &chi_diff);

        let cyl = cylinder(&p);
        case.complex("cylinder-d2", &cyl.complex);
        case.chain_maps("cylinder-maps", &[&cyl.j1, &cyl.front, &cyl.retraction]);
        let through = cyl.retraction.compose(&cyl.j1).ok();
        case.equal("cylinder-factors", &through, &Some(p.clone()));
        let back = cyl.retraction.compose(&cyl.front).ok();
        case.equal("cylinder-section", &back, &Some(ChainMap::identity(&b)));
        let collapse = cyl.front.compose(&cyl.retraction).expect("composable");
        let ok = cyl.contraction.witnesses(&ChainMap::identity(&cyl.complex), &collapse);
        case.check("cylinder-contraction", ok, || homotopy_to_json(&cyl.contraction));
        let bad = degreewise(&cyl.j1, is_admissible_mono);
        case.check("cylinder-split-mono", bad.is_none(), || json!({ "degree": bad }));

        let co = cocylinder(&h);
        case.complex("cocylinder-d2", &co.complex);
        case.chain_maps("cocylinder-maps", &[&co.l, &co.projection, &co.section]);
        let hl = h.compose(&co.l).expect("composable");
        case.check("cocylinder-witness", co.z.witnesses(&co.projection, &hl), || homotopy_to_json(&co.z));
        let back = co.l.compose(&co.section).ok();
        case.equal("cocylinder-section", &back, &Some(ChainMap::identity(&b)));
        case.check("cocylinder-quasi-iso", is_quasi_iso(&co.l), || json!(null));
        case.done()
    })
}

fn degreewise(f: &ChainMap, ok: impl Fn(&Mat) -> bool) -> Option<i32> {
    let lo = f.src().lo().min(f.dst().lo());
    let hi = f.src().hi().max(f.dst().hi());
    (lo..=hi).find(|&n| !ok(&f.comp(n)))
}

/// The leg of a homotopy pullback opposite a quasi-isomorphism is one.
pub fn pullback_quasi_iso(config: &RunConfig, count: usize) -> Vec<CheckRecord> {
    const SUITE: &str = "pullback-quasi-iso";
    cases(count, |i| {
        let mut g = gen_for(config, config.sizes, SUITE, "", i);
        let f = g.quasi_iso();
        let z = g.complex();
        let h = g.chain_map(&z, f.dst());
        let inputs = json!([chain_map_to_json(&f), chain_map_to_json(&h)]);
        let mut case = Case::new(format!("{SUITE}/{i:03}"), &inputs);
        case.check("input-quasi-iso", is_quasi_iso(&f), || json!(null));
        if let Some(pb) = case.ok("pullback", h_pullback(&f, &h)) {
            case.complex("pullback-d2", &pb.complex);
            case.check("leg-quasi-iso", is_quasi_iso(&pb.f_prime), || chain_map_to_json(&pb.f_prime));
        }
        case.done()
    })
}

/// The homology and the cone criteria for quasi-isomorphisms agree, and an
/// acyclic cone is contractible.
pub fn quasi_iso_coherence(config: &RunConfig, count: usize) -> Vec<CheckRecord> {
    const SUITE: &str = "quasi-iso-coherence";
    cases(count, |i| {
        let mut g = gen_for(config, config.sizes, SUITE, "", i);
        let f = g.any_map();
        let mut case = Case::new(format!("{SUITE}/{i:03}"), &chain_map_to_json(&f));
        let (by_homology, by_cone) = (quasi_iso_by_homology(&f), quasi_iso_by_cone(&f));
        case.check("methods-agree", by_homology == by_cone, || {
            json!({ "by_homology": by_homology, "by_cone": by_cone })
        });
        if i < count / 2 {
            let cn = cone(&f);
            let contraction = solve_homotopy(&ChainMap::identity(&cn), &ChainMap::zero(&cn, &cn));
            if let Some(k) = case.ok("cone-contraction", contraction) {
                let (acyclic, contractible) = (is_acyclic(&cn), k.is_some());
                case.check("cone-contraction", acyclic == contractible, || {
                    json!({ "acyclic": acyclic, "contractible": contractible })
                });
            }
        }
        if by_homology {
            let (lo, hi) = (f.src().lo().min(f.dst().lo()), f.src().hi().max(f.dst().hi()));
            let differ = (lo..=hi).find(|&n| homology(f.src(), n) != homology(f.dst(), n));
            case.check("homology-invariant", differ.is_none(), || json!({ "degree": differ }));
        }
        case.done()
    })
}

/// Strictification of homotopy commutative squares and lifting of maps of roofs.
pub fn strictification(config: &RunConfig, count: usize) -> Vec<CheckRecord> {
    const SUITE: &str = "strictification";
    let small = capped(config.sizes, 3, 2);
    let mut out = cases(count, |i| {
        let mut g = gen_for(config, small, SUITE, "square", i);
        let sq = g.homotopy_square();
        let inputs = json!([
            chain_map_to_json(&sq.top),
            chain_map_to_json(&sq.right),
            chain_map_to_json(&sq.bottom),
            chain_map_to_json(&sq.left),
            homotopy_to_json(&sq.m),
        ]);
        let mut case = Case::new(format!("{SUITE}/square/{i:03}"), &inputs);
        let Some(st) = case.ok("strictify", strictify_square(&sq)) else { return case.done() };
        case.complex("apex-d2", &st.apex);
        case.chain_maps("maps", &[&st.top, &st.l, &st.right_left, &st.right_other]);
        case.equal("lifts-top", &st.l.compose(&st.top).ok(), &Some(sq.top.clone()));
        case.equal("first-square", &st.right_left.compose(&st.top).ok(), &sq.bottom.compose(&sq.left).ok());
        case.equal("second-square", &st.right_other.compose(&st.top).ok(), &sq.bottom.compose(&sq.other_left).ok());
        let ok = st.homotopy.witnesses(&st.top, &sq.bottom, (&sq.other_left, &st.right_other), (&sq.left, &st.right_left));
        case.check("arrow-homotopy", ok, || json!(null));
        case.check("l-quasi-iso", is_quasi_iso(&st.l), || json!(null));
        case.done()
    });
    for (label, quasi_isos) in [("roofs", false), ("roofs-quasi-iso", true)] {
        out.extend(cases(count, |i| {
            let mut g = gen_for(config, small, SUITE, label, i);
            let d = g.arrow_roofs(quasi_isos);
            let inputs = json!([
                chain_map_to_json(&d.a),
                chain_map_to_json(&d.s0),
                chain_map_to_json(&d.s1),
                chain_map_to_json(&d.y),
                chain_map_to_json(&d.f0),
                chain_map_to_json(&d.f1),
                chain_map_to_json(&d.c),
                chain_map_to_json(&d.t),
                chain_map_to_json(&d.h),
                chain_map_to_json(&d.u),
                chain_map_to_json(&d.v),
            ]);
            let mut case = Case::new(format!("{SUITE}/{label}/{i:03}"), &inputs);
            let Some(lifted) = case.ok("lift", lift_arrow_representative(&d)) else { return case.done() };
            case.complex("apex-d2", &lifted.apex);
            case.chain_maps("maps", &[&lifted.x, &lifted.q, &lifted.g]);
            let bad = degreewise(&lifted.x, is_admissible_mono);
            case.check("split-mono", bad.is_none(), || json!({ "degree": bad }));
            case.equal("left-square", &lifted.q.compose(&lifted.x).ok(), &d.a.compose(&lifted.bottom_s).ok());
            case.equal("right-square", &lifted.g.compose(&lifted.x).ok(), &d.c.compose(&lifted.bottom_f).ok());
            case.check("q-quasi-iso", is_quasi_iso(&lifted.q), || json!(null));
            if quasi_isos {
                case.check("g-quasi-iso", is_quasi_iso(&lifted.g), || chain_map_to_json(&lifted.g));
            }
            case.done()
        }));
    }
    out
}

/// Both halves of the equivalence between `⌐`-diagrams and cocartesian squares.
pub fn van(config: &RunConfig, count: usize) -> Vec<CheckRecord> {
    const SUITE: &str = "van";
    let mut out = cases(count, |i| {
        let mut g = gen_for(config, config.sizes, SUITE, "corner", i);
        let corner = g.corner();
        let mut case = Case::new(format!("{SUITE}/corner/{i:03}"), &diagram_to_json(&corner));
        if let Some(square) = case.ok("complete", pushout_complete(&corner)) {
            case.equal("restrict-complete", &square.restrict(&Poset::corner()).ok(), &Some(corner.clone()));
            let co = is_cocartesian(&square);
            case.check("cocartesian", co == Ok(true), || json!(format!("{co:?}")));
        }
        case.done()
    });
    out.extend(cases(count, |i| {
        let mut g = gen_for(config, config.sizes, SUITE, "square", i);
        let square = g.cocartesian_square();
        let mut case = Case::new(format!("{SUITE}/square/{i:03}"), &diagram_to_json(&square));
        let co = is_cocartesian(&square);
        case.check("input-cocartesian", co == Ok(true), || json!(format!("{co:?}")));
        if let Some(cmp) = case.ok("comparison", pushout_comparison(&square)) {
            case.chain_maps("comparison-chain-map", &[&cmp]);
            case.check("corner-quasi-iso", is_quasi_iso(&cmp), || chain_map_to_json(&cmp));
        }
        case.done()
    }));
    out
}

/// Replacing `Δ³` diagrams by filtrations of split monomorphisms.
pub fn filtration(config: &RunConfig, count: usize) -> Vec<CheckRecord> {
    const SUITE: &str = "filtration";
    cases(count, |i| {
        let mut g = gen_for(config, config.sizes, SUITE, "", i);
        let d = g.delta_diagram(3);
        let mut case = Case::new(format!("{SUITE}/{i:03}"), &diagram_to_json(&d));
        let Some(out) = case.ok("build", diagram_to_filtration(&d)) else { return case.done() };
        let bad = split_mono_violation(&out.filtration);
        case.check("split-mono", bad.is_none(), || json!(format!("{bad:?}")));
        for (v, q) in out.comparison.components().iter().enumerate() {
            case.check(&format!("vertex-{v}-quasi-iso"), is_quasi_iso(q), || json!(null));
            match homotopy_inverse(q) {
                Ok(hi) => {
                    let x = ChainMap::identity(q.src());
                    let y = ChainMap::identity(q.dst());
                    let back = hi.inv.compose(q).expect("composable");
                    let forth = q.compose(&hi.inv).expect("composable");
                    let ok = hi.k1.witnesses(&back, &x) && hi.k2.witnesses(&forth, &y);
                    case.check(&format!("vertex-{v}-inverse"), ok, || json!(null));
                }
                Err(e) => case.check(&format!("vertex-{v}-inverse"), false, || error_witness(&e)),
            }
        }
        case.done()
    })
}

/// Simplicial identities on `S_n` objects, the filtration round trip and the validator.
pub fn s_construction(config: &RunConfig, count: usize, corrupt: usize) -> Vec<CheckRecord> {
    const SUITE: &str = "s-construction";
    let small = capped(config.sizes, 3, 2);
    cases(count, |i| {
        let mut g = gen_for(config, small, SUITE, "", i);
        let f = g.filtration(3 + i % 2);
        let mut case = Case::new(format!("{SUITE}/{i:03}"), &filtration_to_json(&f));
        let Some(s) = case.ok("build", from_filtration(&f)) else { return case.done() };
        let accepted = SnObject::new(s.diagram().clone());
        case.check("validator-accepts", accepted.is_ok(), || error_witness(&accepted.unwrap_err()));
        case.equal("round-trip", &forget_quotients(&s), &f);
        simplicial_identities(&mut case, &s);
        if i < corrupt {
            match g.corrupt(&s) {
                Ok(bad) => {
                    let got = SnObject::new(bad.diagram);
                    let (ei, ej, ek, ed) = bad.expected;
                    let pinpointed = matches!(
                        got,
                        Err(dercat_core::Error::SnViolation { i, j, k, degree, .. }) if (i, j, k, degree) == (ei, ej, ek, ed)
                    );
                    case.check("validator-rejects", pinpointed, || {
                        json!({ "expected": [ei, ej, ek, ed], "got": format!("{got:?}") })
                    });
                }
                Err(e) => case.check("validator-rejects", false, || error_witness(&e)),
            }
        }
        case.done()
    })
}

fn simplicial_identities(case: &mut Case, s: &SnObject) {
    let n = s.n();
    let face = |x: &SnObject, i: usize| x.face(i).expect("index in range");
    let degen = |x: &SnObject, i: usize| x.degeneracy(i).expect("index in range");
    let mut failures = Vec::new();
    for j in 0..=n {
        for i in 0..j {
            if n >= 2 && face(&face(s, j), i) != face(&face(s, i), j - 1) {
                failures.push(format!("d{i} d{j}"));
            }
        }
    }
    for j in 0..=n {
        for i in 0..=j {
            if degen(&degen(s, j), i) != degen(&degen(s, i), j + 1) {
                failures.push(format!("s{i} s{j}"));
            }
        }
    }
    for j in 0..=n {
        let up = degen(s, j);
        for i in 0..=n + 1 {
            let lhs = face(&up, i);
            let ok = if i < j {
                lhs == degen(&face(s, i), j - 1)
            } else if i == j || i == j + 1 {
                &lhs == s
            } else {
                lhs == degen(&face(s, i - 1), j)
            };
            if !ok {
                failures.push(format!("d{i} s{j}"));
            }
        }
    }
    case.check("simplicial-identities", failures.is_empty(), || json!(failures));
}

/// `χ` is additive on split extensions and `(s, q)` is bijective on the samples.
pub fn additivity(config: &RunConfig, count: usize) -> Vec<CheckRecord> {
    const SUITE: &str = "additivity";
    let samples: Vec<_> = (0..count)
        .into_par_iter()
        .map(|i| gen_for(config, config.sizes, SUITE, "", i).split_extension())
        .collect();
    let inputs = json!(samples.iter().map(ext_to_json).collect::<Vec<_>>());
    let mut case = Case::new(SUITE.to_string(), &inputs);
    for (i, e) in samples.iter().enumerate() {
        let (a, c, b) = (k0_complex(ext_s(e)).0, k0_complex(ext_t(e)).0, k0_complex(ext_q(e)).0);
        case.check(&format!("euler/{i:03}"), c == a + b, || json!({ "sub": a, "total": c, "quotient": b }));
    }
    if let Some(report) = case.ok("k0", additivity_k0(&samples)) {
        for c in report.checks {
            let detail = c.detail.clone();
            case.check(&format!("k0/{}", c.name), c.pass, || json!(detail));
        }
    }
    case.done()
}

/// `Hom` in the derived category: fixed values on `Z` against the classical
/// `Ext` computation, and invariance under quasi-isomorphism.
pub fn derived_hom_suite(config: &RunConfig, count: usize) -> Vec<CheckRecord> {
    const SUITE: &str = "derived-hom";
    let z = Ring::Integers;
    let p = Complex::two_term(0, Mat::lit(z, &[&[2]]));
    let mut fixed = Case::new(format!("{SUITE}/times-two"), &complex_to_json(&p));
    // Ext^k(Z/2, Z/2) from the resolution 0 -> Z -2-> Z: Z/2 for k = 0, 1 and 0 otherwise
    let oracle = |k: i32| -> (usize, Vec<u32>) {
        if k == 0 || k == 1 {
            (0, vec![2])
        } else {
            (0, vec![])
        }
    };
    for k in -1..=2 {
        if let Some(h) = fixed.ok(&format!("shift-{k}"), derived_hom(&p, &shift(&p, k))) {
            let got = (h.free_rank, h.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>());
            let (free, torsion) = oracle(k);
            let want = (free, torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>());
            fixed.equal(&format!("shift-{k}"), &got, &want);
        }
    }
    let mut out = fixed.done();
    let small = capped(config.sizes, 3, 2);
    out.extend(cases(count, |i| {
        let mut g = gen_for(config, small, SUITE, "invariance", i);
        let (x, y) = (g.complex(), g.complex());
        let e = g.contractible();
        let s = g.collapse(&x, &e);
        let inputs = json!([complex_to_json(&x), complex_to_json(&y), chain_map_to_json(&s)]);
        let mut case = Case::new(format!("{SUITE}/invariance/{i:03}"), &inputs);
        let shape = |h: &DerivedHomGroup| (h.free_rank, h.torsion.clone());
        let before = case.ok("hom", derived_hom(&x, &y)).map(|h| shape(&h));
        let after = case.ok("hom", derived_hom(s.src(), &y)).map(|h| shape(&h));
        if before.is_some() && after.is_some() {
            case.equal("invariant", &before, &after);
        }
        case.done()
    }));
    out
}

/// `χ(a ⊗ b) = χ(a) χ(b)`.
pub fn pairing(config: &RunConfig, count: usize) -> Vec<CheckRecord> {
    const SUITE: &str = "pairing";
    cases(count, |i| {
        let mut g = gen_for(config, config.sizes, SUITE, "", i);
        let (a, b) = (g.complex(), g.complex());
        let mut case = Case::new(format!("{SUITE}/{i:03}"), &json!([complex_to_json(&a), complex_to_json(&b)]));
        if let Some((lhs, rhs)) = case.ok("pairing", pairing_k0(&a, &b)) {
            case.equal("pairing", &lhs, &rhs);
        }
        case.done()
    })
}
