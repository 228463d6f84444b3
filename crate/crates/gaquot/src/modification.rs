//! Affine modification: present the ring obtained by blowing up a center
//! ideal and inverting the divisor, and verify that the deformed
//! Koras-Russell threefolds arise this way from affine 3-space.

use crate::constructions::FamilyParams;
use crate::ideal::Ideal;
use crate::poly::Poly;
use crate::report::{CheckError, Checker, Report};
use crate::scheme::{is_isomorphism, Morphism, Scheme, SchemeError};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum ModificationError {
    #[error("divisor does not lie in the center ideal")]
    DivisorNotInCenter,
    #[error("base scheme must be an affine space (empty ideal)")]
    BaseNotAffine,
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Poly(#[from] crate::poly::PolyError),
    #[error(transparent)]
    Engine(#[from] crate::ideal::EngineError),
}

/// Center ideal, divisor, and ambient affine base.
#[derive(Debug, Clone)]
pub struct ModificationData {
    pub base: Scheme,
    pub center: Vec<Poly>,
    pub divisor: Poly,
}

impl ModificationData {
    pub fn new(base: &Scheme, center: Vec<Poly>, divisor: Poly) -> Result<ModificationData, ModificationError> {
        if !base.ideal().gens().is_empty() {
            return Err(ModificationError::BaseNotAffine);
        }
        let center_ideal = Ideal::new(base.vars(), center.clone()).with_budget(*base.budget());
        if !center_ideal
            .member(&divisor)
            .map_err(SchemeError::from)?
        {
            return Err(ModificationError::DivisorNotInCenter);
        }
        Ok(ModificationData {
            base: base.clone(),
            center,
            divisor,
        })
    }
}

/// Presentation of `base[g/f : g in center]`: one new variable per
/// non-divisor generator, relations `f * Z_g - g`, saturated by `f`.
pub fn affine_modification(data: &ModificationData) -> Result<Scheme, ModificationError> {
    let extra: Vec<&Poly> = data
        .center
        .iter()
        .filter(|g| *g != &data.divisor)
        .collect();
    let mut names: Vec<String> = Vec::new();
    {
        let mut taken: Vec<String> = data.base.vars().names().to_vec();
        for k in 0..extra.len() {
            let base_name = if extra.len() == 1 {
                "Z".to_string()
            } else {
                format!("Z{}", k + 1)
            };
            let mut cand = base_name.clone();
            let mut suffix = 0;
            while taken.contains(&cand) {
                suffix += 1;
                cand = format!("{base_name}_{suffix}");
            }
            taken.push(cand.clone());
            names.push(cand);
        }
    }
    let name_refs: Vec<(&str, bool)> = names.iter().map(|n| (n.as_str(), false)).collect();
    let ext = data.base.extend_ambient(&name_refs)?;
    let mut gens = Vec::new();
    for (g, z) in extra.iter().zip(&names) {
        let zv = Poly::var(ext.vars(), z)?;
        gens.push(data.divisor.lift(ext.vars())?.mul(&zv).sub(&g.lift(ext.vars())?));
    }
    let raw = Ideal::new(ext.vars(), gens).with_budget(*data.base.budget());
    let saturated = raw
        .saturation(&data.divisor.lift(ext.vars())?)
        .map_err(SchemeError::from)?;
    Ok(ext.with_relations(saturated.gens())?)
}

/// The modification of affine 3-space along
/// `(x^n, y^m - t^r + x h)` with divisor `x^n` reproduces `Y(m,n,r,h)`,
/// the result is divisor-saturated, and localizing at the divisor
/// recovers the localized base.
pub fn verify_modification_is_y(params: &FamilyParams) -> Report {
    Checker::run(&format!("affine_modification({})", params.label()), |c| {
        params.validate().map_err(CheckError::from)?;
        let mut vars: Vec<(&str, bool)> = vec![("x", false), ("y", false), ("t", false)];
        for p in &params.params {
            vars.push((p.as_str(), true));
        }
        let base = Scheme::affine(&vars)?;
        let h = base.parse(&params.h)?;
        let x = base.parse("x")?;
        let [y, t] = ["y", "t"].map(|v| base.parse(v).unwrap());
        let divisor = x.pow(params.n);
        let second = y.pow(params.m).sub(&t.pow(params.r)).add(&x.mul(&h));
        let data = ModificationData::new(&base, vec![divisor.clone(), second], divisor.clone())
            .map_err(|e| CheckError::Other(e.to_string()))?;
        let modified = affine_modification(&data).map_err(|e| CheckError::Other(e.to_string()))?;

        // trivial sanity: modification along the divisor alone is the base
        let along_self = affine_modification(
            &ModificationData::new(&base, vec![divisor.clone()], divisor.clone())
                .map_err(|e| CheckError::Other(e.to_string()))?,
        )
        .map_err(|e| CheckError::Other(e.to_string()))?;
        c.require(
            "modification along its own divisor is the base",
            along_self.ideal().gens().is_empty() && along_self.vars().len() == base.vars().len(),
            || format!("{:?}", along_self.vars().names()),
        );

        // the presentation matches the hypersurface under Z -> z
        let yb = crate::constructions::build_y(params)?;
        let mut rename = std::collections::BTreeMap::new();
        rename.insert("Z".to_string(), "z".to_string());
        let mapped: Vec<Poly> = modified
            .ideal()
            .gens()
            .iter()
            .map(|g| g.rename_into(&rename, yb.scheme.vars()))
            .collect::<Result<_, _>>()?;
        let as_y = Ideal::new(yb.scheme.vars(), mapped).with_budget(*base.budget());
        c.require(
            "modification ideal equals the hypersurface ideal",
            as_y.equals(yb.scheme.ideal())?,
            || format!("{:?}", as_y.gens().iter().map(|g| g.to_string()).collect::<Vec<_>>()),
        );

        // f-saturated already
        let sat = modified
            .ideal()
            .saturation(&divisor.lift(modified.vars())?)?;
        c.require(
            "modification ideal is divisor-saturated",
            sat.equals(modified.ideal())?,
            || "saturation grows the ideal".into(),
        );

        // inverting the divisor recovers the localized base
        let base_x = base.localize("x")?;
        let mod_x = modified.localize("x")?;
        let to_base: Vec<(String, Poly)> = base
            .ambient_vars()
            .iter()
            .map(|v| Ok((v.clone(), Poly::var(mod_x.vars(), v)?)))
            .collect::<Result<_, CheckError>>()?;
        let to_base_refs: Vec<(&str, Poly)> =
            to_base.iter().map(|(n, p)| (n.as_str(), p.clone())).collect();
        let down = Morphism::new(&mod_x, &base_x, &to_base_refs)?;
        // Z maps to g / x^n on the localization
        let xinv = Poly::var(base_x.vars(), base_x.partner_of("x").unwrap())?;
        let z_img = xinv
            .pow(params.n)
            .mul(&second_on(&base_x, params)?);
        let mut up_imgs: Vec<(String, Poly)> = base
            .ambient_vars()
            .iter()
            .map(|v| Ok((v.clone(), Poly::var(base_x.vars(), v)?)))
            .collect::<Result<_, CheckError>>()?;
        up_imgs.push(("Z".to_string(), z_img));
        let up_refs: Vec<(&str, Poly)> =
            up_imgs.iter().map(|(n, p)| (n.as_str(), p.clone())).collect();
        let up = Morphism::new(&base_x, &mod_x, &up_refs)?;
        let iso = is_isomorphism(&down, &up)?;
        c.require(
            "localization at the divisor is the localized base",
            iso.ok,
            || format!("{:?}", iso.witness),
        );
        Ok(())
    })
}

fn second_on(base_x: &Scheme, params: &FamilyParams) -> Result<Poly, CheckError> {
    let h = base_x.parse(&params.h)?;
    let x = base_x.parse("x")?;
    let y = base_x.parse("y")?;
    let t = base_x.parse("t")?;
    Ok(y.pow(params.m).sub(&t.pow(params.r)).add(&x.mul(&h)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn russell_cubic_as_modification() {
        let base = Scheme::affine(&[("x", false), ("y", false), ("t", false)]).unwrap();
        let x2 = base.parse("x^2").unwrap();
        let g = base.parse("y^2 - t^3 + x").unwrap();
        let data = ModificationData::new(&base, vec![x2.clone(), g], x2).unwrap();
        let s = affine_modification(&data).unwrap();
        assert!(s.vars().contains("Z"));
        let expect = s.parse("x^2*Z - y^2 + t^3 - x").unwrap();
        assert!(s.ideal().member(&expect).unwrap());
        // and nothing more: the hypersurface ideal contains all generators
        let hyper = Ideal::new(s.vars(), vec![expect]);
        for g in s.ideal().gens() {
            assert!(hyper.member(g).unwrap(), "extra generator {g}");
        }
    }

    #[test]
    fn divisor_must_lie_in_center() {
        let base = Scheme::affine(&[("x", false), ("y", false)]).unwrap();
        let err = ModificationData::new(
            &base,
            vec![base.parse("y").unwrap()],
            base.parse("x").unwrap(),
        );
        assert!(matches!(err, Err(ModificationError::DivisorNotInCenter)));
    }

    #[test]
    fn y322_style_presentation() {
        let base = Scheme::affine(&[("x", false), ("y", false), ("t", false)]).unwrap();
        let x2 = base.parse("x^2").unwrap();
        let g = base.parse("y^3 - t^2").unwrap();
        let data = ModificationData::new(&base, vec![x2.clone(), g], x2).unwrap();
        let s = affine_modification(&data).unwrap();
        let expect = s.parse("x^2*Z - y^3 + t^2").unwrap();
        assert!(s.ideal().member(&expect).unwrap());
    }

    #[test]
    fn full_verification_for_russell_cubic() {
        let rep = verify_modification_is_y(&FamilyParams::new(2, 2, 3, "1", &[]));
        assert!(rep.passed(), "{rep:?}");
    }
}
