use crate::error::{Error, Result};
use crate::filtration::{superficial_sequence, Filtration};
use crate::module::{FreeModule, GradedSubmodule, ModulePresentation};
use crate::ring::{Ring, RingDescriptor};

/// Generators of the five-generator ideal of `Q[x,y,z]` whose square is `m^4`.
pub const M4_SQUARE_GENERATORS: [&str; 5] = ["x^2 - y^2", "y^2 - z^2", "x*y", "x*z", "y*z"];

#[derive(Debug)]
pub struct FixtureModule {
    pub name: String,
    pub presentation: ModulePresentation,
    /// Asserted maximal Cohen-Macaulay; re-checked by [`Fixture::verify_assertions`].
    pub mcm: bool,
}

#[derive(Debug)]
pub struct Fixture {
    pub name: String,
    pub ring: Ring,
    pub ideals: Vec<(String, GradedSubmodule)>,
    /// The ring itself comes first.
    pub modules: Vec<FixtureModule>,
    pub note: String,
}

impl Fixture {
    fn new(name: &str, ring: Ring, note: &str) -> Self {
        let modules = vec![FixtureModule {
            name: "A".into(),
            presentation: ModulePresentation::ring_itself(&ring),
            mcm: true,
        }];
        Fixture {
            name: name.into(),
            ring,
            ideals: Vec::new(),
            modules,
            note: note.into(),
        }
    }

    fn ideal(mut self, name: &str, gens: &[&str]) -> Result<Self> {
        let i = GradedSubmodule::ideal_from_text(&self.ring, gens)?;
        self.ideals.push((name.into(), i));
        Ok(self)
    }

    fn module(mut self, name: &str, rows: &[&[&str]]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| self.ring.parse(s)).collect())
            .collect::<Result<Vec<_>>>()?;
        self.modules.push(FixtureModule {
            name: name.into(),
            presentation: ModulePresentation::cokernel(&self.ring, rows)?,
            mcm: true,
        });
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.ring.krull_dim()
    }

    /// The ideal named `name`, or the first ideal for `None`.
    pub fn get_ideal(&self, name: Option<&str>) -> Result<&GradedSubmodule> {
        match name {
            None => self.ideals.first().map(|(_, i)| i),
            Some(n) => self.ideals.iter().find(|(k, _)| k == n).map(|(_, i)| i),
        }
        .ok_or_else(|| Error::Input(format!("fixture {} has no ideal {name:?}", self.name)))
    }

    pub fn get_module(&self, name: &str) -> Result<&FixtureModule> {
        self.modules
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| Error::Input(format!("fixture {} has no module {name}", self.name)))
    }

    /// The same fixture over a ring with a different working degree bound.
    pub fn rebound(&self, bound: i32) -> Result<Fixture> {
        let ring = self.ring.with_degree_bound(bound);
        let ideals = self
            .ideals
            .iter()
            .map(|(n, i)| {
                Ok((
                    n.clone(),
                    GradedSubmodule::ideal(&ring, i.polynomial_generators())?,
                ))
            })
            .collect::<Result<_>>()?;
        let modules = self
            .modules
            .iter()
            .map(|m| {
                let free = FreeModule::new(ring.clone(), m.presentation.free().twists().to_vec());
                Ok(FixtureModule {
                    name: m.name.clone(),
                    presentation: ModulePresentation::new(free, m.presentation.columns().to_vec())?,
                    mcm: m.mcm,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Fixture {
            name: self.name.clone(),
            ring,
            ideals,
            modules,
            note: self.note.clone(),
        })
    }

    /// Re-verifies every MCM assertion with a superficial sequence of length
    /// `dim` for the maximal ideal whose elements are all nonzerodivisors.
    pub fn verify_assertions(&self, seed: u64) -> Result<Vec<(String, bool)>> {
        self.modules
            .iter()
            .filter(|m| m.mcm)
            .map(|m| Ok((m.name.clone(), is_mcm(&m.presentation, seed)?)))
            .collect()
    }
}

/// Whether the maximal ideal has a superficial sequence of length `dim` on the
/// module made of nonzerodivisors, which makes the module maximal Cohen-Macaulay.
pub fn is_mcm(module: &ModulePresentation, seed: u64) -> Result<bool> {
    let ring = module.ring();
    if ring.krull_dim() == 0 {
        return Ok(true);
    }
    let f = Filtration::adic(&GradedSubmodule::maximal_ideal(ring), module)?;
    let seq = superficial_sequence(&f, ring.krull_dim(), seed)?;
    Ok(seq.certificates.iter().all(|c| c.regular))
}

/// (a) `Q[x,y,z]` with the five-generator ideal whose square is `m^4`.
pub fn m4_square() -> Result<Fixture> {
    let ring = RingDescriptor::polynomial(&["x", "y", "z"]);
    Fixture::new("m4-square", ring, "Q[x,y,z]; I^2 = m^4, depth G_I(A) = 0")
        .ideal("I", &M4_SQUARE_GENERATORS)?
        .ideal("m", &["x", "y", "z"])
}

/// (b) The classic ideal that is not Ratliff-Rush closed.
pub fn rr_classic() -> Result<Fixture> {
    let ring = RingDescriptor::polynomial(&["x", "y"]);
    Fixture::new(
        "rr-classic",
        ring,
        "Q[x,y]; x^2y^2 lies in the closure of I but not in I",
    )
    .ideal("I", &["x^4", "x^3*y", "x*y^3", "y^4"])
}

/// (c) The quadric cone with a rank-two MCM module from quaternion multiplication.
pub fn quadric() -> Result<Fixture> {
    let ring = RingDescriptor::quotient(&["x", "y", "z"], &["x^2 + y^2 + z^2"], 2)?;
    Fixture::new("quadric", ring, "Q[x,y,z]/(x^2+y^2+z^2) with m")
        .ideal("m", &["x", "y", "z"])?
        // left multiplication by xi + yj + zk on the quaternions
        .module(
            "Q",
            &[
                &["0", "-x", "-y", "-z"],
                &["x", "0", "-z", "y"],
                &["y", "z", "0", "-x"],
                &["z", "-y", "x", "0"],
            ],
        )
}

/// (d) A rank-two free extension of `Q[x,y,z]` with the extended ideal of (a)
/// and a nonfree MCM module from a matrix factorization of `w^2 - xy`.
pub fn hypersurface3() -> Result<Fixture> {
    let ring = RingDescriptor::quotient(&["x", "y", "z", "w"], &["w^2 - x*y"], 3)?;
    Fixture::new(
        "hypersurface-3",
        ring,
        "Q[x,y,z,w]/(w^2-xy), free over Q[x,y,z] on 1, w; I extended from (a)",
    )
    .ideal("I", &M4_SQUARE_GENERATORS)?
    .module("M", &[&["w", "x"], &["y", "w"]])
}

/// (e) Parameter ideals of `Q[x,y]`.
pub fn parameters() -> Result<Fixture> {
    let ring = RingDescriptor::polynomial(&["x", "y"]);
    Fixture::new(
        "parameters",
        ring,
        "Q[x,y]; ideals generated by systems of parameters",
    )
    .ideal("m", &["x", "y"])?
    .ideal("p22", &["x^2", "y^2"])?
    .ideal("p23", &["x^2", "y^3"])?
    .ideal("p33", &["x^3", "y^3"])?
    .ideal("q", &["x^2", "y^2 + x*y"])
}

/// The rational normal scroll of degree two with its rank-one MCM module.
pub fn scroll() -> Result<Fixture> {
    let ring = RingDescriptor::quotient(&["x", "y", "z"], &["x*z - y^2"], 2)?;
    Fixture::new("scroll", ring, "Q[x,y,z]/(xz-y^2) with m")
        .ideal("m", &["x", "y", "z"])?
        .module("M", &[&["x", "y"], &["y", "z"]])
}

pub fn cubic_cone() -> Result<Fixture> {
    let ring = RingDescriptor::quotient(&["x", "y", "z"], &["x^3 + y^3 + z^3"], 2)?;
    Fixture::new("cubic-cone", ring, "Q[x,y,z]/(x^3+y^3+z^3) with m").ideal("m", &["x", "y", "z"])
}

pub fn double_line() -> Result<Fixture> {
    let ring = RingDescriptor::quotient(&["x", "y"], &["y^2"], 1)?;
    Fixture::new("double-line", ring, "Q[x,y]/(y^2) with m").ideal("m", &["x", "y"])
}

pub fn node() -> Result<Fixture> {
    let ring = RingDescriptor::quotient(&["x", "y"], &["x*y"], 1)?;
    Fixture::new("node", ring, "Q[x,y]/(xy) with m").ideal("m", &["x", "y"])
}

pub fn line() -> Result<Fixture> {
    let ring = RingDescriptor::polynomial(&["t"]);
    Fixture::new("line", ring, "Q[t] with principal ideals")
        .ideal("m", &["t"])?
        .ideal("t3", &["t^3"])
}

pub fn plane() -> Result<Fixture> {
    let ring = RingDescriptor::polynomial(&["x", "y"]);
    Fixture::new(
        "plane",
        ring,
        "Q[x,y] with m-adic and a non-parameter ideal",
    )
    .ideal("m", &["x", "y"])?
    .ideal("m2", &["x^2", "x*y", "y^2"])
}

pub fn space() -> Result<Fixture> {
    let ring = RingDescriptor::polynomial(&["x", "y", "z"]);
    Fixture::new("space", ring, "Q[x,y,z] with m-adic and a parameter ideal")
        .ideal("m", &["x", "y", "z"])?
        .ideal("p222", &["x^2", "y^2", "z^2"])
}

/// A monomial ideal of `Q[x,y,z]` with `e_2 = 0` and `e_3 = -1`, found by a
/// lattice-point search over small monomial ideals.
pub fn negative_e3() -> Result<Fixture> {
    let ring = RingDescriptor::polynomial(&["x", "y", "z"]);
    Fixture::new("negative-e3", ring, "Q[x,y,z]; e = (14, 7, 0, -1)")
        .ideal("I", &["x^2", "x*y", "x*z", "y^3", "y*z^2", "z^3"])
}

/// Fixtures built for a single check rather than the whole suite. The ideal
/// of [`negative_e3`] has no homogeneous superficial element among the
/// candidates tried, so only the Hilbert coefficients are meaningful there.
pub fn synthetic_fixtures() -> Result<Vec<Fixture>> {
    Ok(vec![negative_e3()?])
}

/// Every builtin fixture, sorted by name.
pub fn builtin_fixtures() -> Result<Vec<Fixture>> {
    let mut all = vec![
        m4_square()?,
        rr_classic()?,
        quadric()?,
        hypersurface3()?,
        parameters()?,
        scroll()?,
        cubic_cone()?,
        double_line()?,
        node()?,
        line()?,
        plane()?,
        space()?,
    ];
    all.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(all)
}

/// A builtin or synthetic fixture by name, optionally with a different
/// working degree bound.
pub fn fixture_with_bound(name: &str, bound: Option<i32>) -> Result<Fixture> {
    let f = fixture(name)?;
    match bound {
        None => Ok(f),
        Some(b) => f.rebound(b),
    }
}

pub fn fixture(name: &str) -> Result<Fixture> {
    match name {
        "m4-square" | "a" => m4_square(),
        "rr-classic" | "b" => rr_classic(),
        "quadric" | "c" => quadric(),
        "hypersurface-3" | "d" => hypersurface3(),
        "parameters" | "e" => parameters(),
        "scroll" => scroll(),
        "cubic-cone" => cubic_cone(),
        "double-line" => double_line(),
        "node" => node(),
        "line" => line(),
        "plane" => plane(),
        "space" => space(),
        "negative-e3" => negative_e3(),
        _ => Err(Error::Input(format!("unknown fixture `{name}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_load() {
        let all = builtin_fixtures().unwrap();
        assert_eq!(all.len(), 12);
        assert_eq!(m4_square().unwrap().dim(), 3);
        let d = hypersurface3().unwrap();
        let m = d.get_module("M").unwrap();
        for c in m.presentation.columns() {
            assert_eq!(m.presentation.free().degree_of(c), Some(1));
        }
    }

    #[test]
    fn small_mcm_assertions_hold() {
        for f in [
            scroll().unwrap(),
            double_line().unwrap(),
            quadric().unwrap(),
        ] {
            for (name, ok) in f.verify_assertions(0).unwrap() {
                assert!(ok, "{} {name}", f.name);
            }
        }
    }
}
