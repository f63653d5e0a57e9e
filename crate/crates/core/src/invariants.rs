//! Brauer-group invariants of tori and homogeneous spaces, computed on the
//! character lattice over a finite splitting group.
//!
//! Every report carries several independent routes to the same group; a
//! disagreement between routes is reported as an error.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cohomology::{h1, h2_shifted, sha_omega};
use crate::error::{Error, Result};
use crate::flasque::{
    coflasque_resolution, flasque_resolution, flasque_resolution_with, pullback_resolution,
    pushout, similarity_fingerprint, GeneratorOrder, LatticeExtension, SimilarityFingerprint,
};
use crate::lattice::{GLattice, LatticeMap};
use crate::limits::Limits;
use crate::linalg::AbelianGroupStructure;

pub const ROUTE_H1_F: &str = "H1_of_F";
pub const ROUTE_H1_F_PULLBACK: &str = "H1_of_F_pullback";
pub const ROUTE_SHA1_T: &str = "sha1_T";
pub const ROUTE_SHA2_Q_DIRECT: &str = "sha2_Q_direct";
pub const ROUTE_SHA2_Q_SHIFTED: &str = "sha2_Q_shifted";

const NOTE_MODULE_LEVEL: &str =
    "computed from the Galois lattice over a finite splitting group; no field arithmetic is involved";
const NOTE_INJECTION: &str =
    "Br1(X_c)/Br(k) embeds in Sha^1_omega(k, T); the embedding is an isomorphism \
     when X has a rational point or k is a number field, which cannot be decided from the lattice";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub input: String,
    pub brauer_quotient: AbelianGroupStructure,
    pub routes: BTreeMap<String, AbelianGroupStructure>,
    pub consistent: bool,
    pub picard_fingerprint: SimilarityFingerprint,
    pub annotations: Vec<String>,
}

impl InvariantReport {
    fn assemble(
        input: String,
        brauer_quotient: AbelianGroupStructure,
        routes: BTreeMap<String, AbelianGroupStructure>,
        picard_fingerprint: SimilarityFingerprint,
        annotations: Vec<String>,
    ) -> Result<Self> {
        let consistent = routes.values().all(|r| r == &brauer_quotient);
        let report = InvariantReport {
            input,
            brauer_quotient,
            routes,
            consistent,
            picard_fingerprint,
            annotations,
        };
        if !consistent {
            return Err(Error::RouteDisagreement(report.dump()));
        }
        Ok(report)
    }

    fn dump(&self) -> String {
        let routes: Vec<String> = self
            .routes
            .iter()
            .map(|(k, v)| format!("{k} = {v}"))
            .collect();
        format!(
            "{}: expected {}; {}",
            self.input,
            self.brauer_quotient,
            routes.join(", ")
        )
    }
}

fn describe(name: &str, m: &GLattice) -> String {
    format!(
        "{name}: lattice of rank {} over a group of order {}",
        m.rank(),
        m.group().order()
    )
}

fn within_bar_bound(m: &GLattice) -> bool {
    m.group().order() <= Limits::from_env().max_bar_order
}

/// `Br(Q_c)/Br(k) = H^1(G, F)` for a flasque resolution `0 -> Q -> P -> F -> 0`
/// of the character lattice `Q` of a torus, cross-checked against
/// `Ш^2_ω(G, Q)` by dimension shifting and, for small groups, directly.
pub fn brauer_torus_compactification(q: &GLattice) -> Result<InvariantReport> {
    let res = flasque_resolution(q)?;
    let brauer = h1(res.flasque()).structure().clone();
    let mut routes = BTreeMap::new();
    routes.insert(ROUTE_H1_F.to_string(), brauer.clone());
    let other = flasque_resolution_with(q, GeneratorOrder::Reversed)?;
    routes.insert(
        ROUTE_SHA2_Q_SHIFTED.to_string(),
        h2_shifted(q, &other.extension)?,
    );
    if within_bar_bound(q) {
        routes.insert(ROUTE_SHA2_Q_DIRECT.to_string(), sha_omega(2, q)?);
    }
    InvariantReport::assemble(
        describe("torus compactification", q),
        brauer,
        routes,
        similarity_fingerprint(res.flasque()),
        vec![NOTE_MODULE_LEVEL.to_string()],
    )
}

/// `0 -> P' -> F -> T -> 0` with `P'` a permutation lattice and `F` flasque:
/// the push-out of a coflasque resolution `0 -> C -> P -> T -> 0` along a
/// flasque resolution `C -> P'` of `C`.
pub fn picard_resolution(t: &GLattice) -> Result<LatticeExtension> {
    let co = coflasque_resolution(t)?;
    let res_c = flasque_resolution(co.sub())?;
    let out = pushout(&co, res_c.extension.inject())?;
    if !out.sub().is_permutation_certified() {
        return Err(Error::Internal(
            "push-out kernel is not a permutation lattice".into(),
        ));
    }
    Ok(out)
}

/// A flasque lattice `F` with `0 -> P -> F -> T -> 0`, `P` permutation,
/// and its fingerprint, which records the class of `Pic` of a smooth
/// compactification up to permutation summands.
pub fn picard_flasque_class(t: &GLattice) -> Result<(GLattice, SimilarityFingerprint)> {
    let ext = picard_resolution(t)?;
    let f = ext.middle().clone();
    let fp = similarity_fingerprint(&f);
    Ok((f, fp))
}

/// `Ш^1_ω(G, T)` for the character lattice `T` of the torus attached to a
/// homogeneous space, with `H^1(G, F)` for the flasque lattice of
/// [`picard_flasque_class`] and the `Ш^2_ω` of the kernel of a coflasque
/// resolution as further routes.
pub fn brauer_homogeneous_space(t: &GLattice) -> Result<InvariantReport> {
    let sha1 = sha_omega(1, t)?;
    let (f, fp) = picard_flasque_class(t)?;
    let mut routes = BTreeMap::new();
    routes.insert(ROUTE_SHA1_T.to_string(), sha1.clone());
    routes.insert(ROUTE_H1_F.to_string(), h1(&f).structure().clone());
    let q = coflasque_resolution(t)?.sub().clone();
    let res_q = flasque_resolution(&q)?;
    routes.insert(
        ROUTE_SHA2_Q_SHIFTED.to_string(),
        h2_shifted(&q, &res_q.extension)?,
    );
    if within_bar_bound(&q) {
        routes.insert(ROUTE_SHA2_Q_DIRECT.to_string(), sha_omega(2, &q)?);
    }
    InvariantReport::assemble(
        describe("homogeneous space", t),
        sha1,
        routes,
        fp,
        vec![NOTE_MODULE_LEVEL.to_string(), NOTE_INJECTION.to_string()],
    )
}

/// For `0 -> Q -> P -> T -> 0` given by a surjection from a permutation
/// lattice, computes `H^1(G, F)` from two flasque resolutions of `Q` (one
/// directly, one as the fibered product with [`picard_resolution`]),
/// `Ш^1_ω(G, T)`, and `Ш^2_ω(G, Q)` shifted and direct, and requires all to agree.
pub fn verify_resolution_chain(
    t: &GLattice,
    p: &GLattice,
    surj: &LatticeMap,
) -> Result<InvariantReport> {
    if surj.source() != p || surj.target() != t {
        return Err(Error::DimensionMismatch(
            "map does not go from P to T".into(),
        ));
    }
    if !p.permutation_certificate().is_some_and(|c| c.verify(p)) {
        return Err(Error::InvalidExtension(
            "P is not a certified permutation lattice".into(),
        ));
    }
    let res_t = LatticeExtension::from_surjection(surj.clone())?;
    let q = res_t.sub().clone();

    let direct = flasque_resolution(&q)?;
    let h1_direct = h1(direct.flasque()).structure().clone();
    let pulled = pullback_resolution(&res_t, &picard_resolution(t)?)?;
    let f = pulled.quotient().clone();
    let fp = similarity_fingerprint(&f);

    let mut routes = BTreeMap::new();
    routes.insert(ROUTE_H1_F.to_string(), h1_direct.clone());
    routes.insert(ROUTE_H1_F_PULLBACK.to_string(), h1(&f).structure().clone());
    routes.insert(ROUTE_SHA1_T.to_string(), sha_omega(1, t)?);
    routes.insert(ROUTE_SHA2_Q_SHIFTED.to_string(), h2_shifted(&q, &pulled)?);
    if within_bar_bound(&q) {
        routes.insert(ROUTE_SHA2_Q_DIRECT.to_string(), sha_omega(2, &q)?);
    }
    if !fp.same_h1_entries(&similarity_fingerprint(direct.flasque())) {
        return Err(Error::RouteDisagreement(
            "the two flasque lattices have different H^1 fingerprints".into(),
        ));
    }
    InvariantReport::assemble(
        describe("exact sequence 0 -> Q -> P -> T -> 0", t),
        h1_direct,
        routes,
        fp,
        vec![NOTE_MODULE_LEVEL.to_string()],
    )
}
