use std::fs;
use std::path::{Path, PathBuf};

use conic_transport::cone_geometry::cost;
use conic_transport::gauss_image::{certify_optimality, compare_map, pushforward_report, solve_gauss_image};
use conic_transport::io::{
    from_json, to_json, CertificationJson, ConeJson, MapComparisonJson, MapJson, MeasureJson, MonotoneJson, PairsJson,
    PseudoConeJson, QueriesJson, SolutionJson, VerifyJson,
};
use conic_transport::rochet::{build_potential, verify_containment};
use conic_transport::section::{export_section, SectionPlane};
use conic_transport::transport::{monotonicity_bruteforce, monotonicity_cycles};
use conic_transport::{
    ConeSpec, DiscreteMeasure, Error, GaussImage, PseudoCone, RegionKind, SphericalRegion, UnitVector,
};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::args::{Cli, Command, Method, Region};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            Self::Io { .. } | Self::Usage(_) | Self::Core(Error::Schema(_)) => 3,
            Self::Core(Error::CertificateFailure(_)) => 1,
            Self::Core(_) => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Overridable tolerances with their library defaults.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative gap allowed for `(v, u) ∈ ∂•K`.
    pub containment: f64,
    /// How far a competitor may undercut the optimum.
    pub competitor: f64,
    /// Cycle weight below `-monotone` is a violation.
    pub monotone: f64,
    /// How far a user map may undercut the optimum.
    pub map: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            containment: conic_transport::pseudo_cone::SUBDIFFERENTIAL_TOL,
            competitor: conic_transport::gauss_image::COMPETITOR_TOL,
            monotone: conic_transport::transport::MONOTONE_TOL,
            map: conic_transport::gauss_image::COMPETITOR_TOL,
        }
    }
}

impl Tolerances {
    pub fn parse(overrides: &[String]) -> Result<Self> {
        let mut t = Self::default();
        for o in overrides {
            let (name, value) = o
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("tolerance override {o:?} is not NAME=VALUE")))?;
            let value: f64 = value
                .parse()
                .map_err(|_| CliError::Usage(format!("tolerance {name}: {value:?} is not a number")))?;
            if !(value > 0.0 && value.is_finite()) {
                return Err(CliError::Usage(format!("tolerance {name} must be positive")));
            }
            let slot = match name {
                "containment" => &mut t.containment,
                "competitor" => &mut t.competitor,
                "monotone" => &mut t.monotone,
                "map" => &mut t.map,
                _ => return Err(CliError::Usage(format!("unknown tolerance {name:?}"))),
            };
            *slot = value;
        }
        Ok(t)
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    from_json(&read(path)?).map_err(|e| match e {
        Error::Schema(m) => CliError::Core(Error::Schema(format!("{}: {m}", path.display()))),
        other => other.into(),
    })
}

fn read_cone(path: &Path) -> Result<ConeSpec> {
    Ok(ConeSpec::try_from(read_json::<ConeJson>(path)?)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.to_owned(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    emit(out, &to_json(value)?)
}

fn unit(coords: Vec<f64>) -> Result<UnitVector> {
    Ok(UnitVector::new(coords)?)
}

fn coords(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.16e}")).collect::<Vec<_>>().join(" ")
}

/// Runs one command and returns its exit code.
pub fn run(cli: Cli) -> Result<u8> {
    let tol = Tolerances::parse(&cli.tol)?;
    let seed = cli.seed;
    match cli.command {
        Command::CheckMonotone {
            pairs,
            cone,
            method,
            out,
        } => {
            let cone = read_cone(&cone)?;
            let s = read_json::<PairsJson>(&pairs)?.into_pairing(&cone)?;
            let (report, name) = match method {
                Method::Brute => (monotonicity_bruteforce(&s, &cone)?, "brute"),
                Method::Cycles => (monotonicity_cycles(&s, &cone)?, "cycles"),
            };
            let mut json = MonotoneJson::new(&report, name);
            json.monotone = report.worst_weight >= -tol.monotone;
            emit_json(out.as_deref(), &json)?;
            Ok(if json.monotone { 0 } else { 1 })
        }

        Command::BuildCone { pairs, cone, base, out } => {
            let cone = read_cone(&cone)?;
            let s = read_json::<PairsJson>(&pairs)?.into_pairing(&cone)?;
            let p = match build_potential(&s, base, &cone) {
                Ok(p) => p,
                Err(Error::NotMonotone { cycle, weight }) => {
                    let report = serde_json::json!({
                        "error": "not_monotone",
                        "cycle": cycle,
                        "weight": weight,
                    });
                    print!("{}", to_json(&report)?);
                    return Err(Error::NotMonotone { cycle, weight }.into());
                }
                Err(e) => return Err(e.into()),
            };
            let k = p.build_cone()?;
            let report = verify_containment(&s, &k, tol.containment)?;
            let mut json = PseudoConeJson::from(&k);
            json.a = Some(p.a().to_vec());
            json.b = Some(p.b().to_vec());
            json.verify = Some(VerifyJson::new(&report, tol.containment));
            emit_json(out.as_deref(), &json)?;
            Ok(if report.ok { 0 } else { 1 })
        }

        Command::Solve {
            mu,
            nu,
            cone,
            certify,
            out,
        } => {
            let fallback = cone.as_deref().map(read_cone).transpose()?;
            let mu = read_json::<MeasureJson>(&mu)?.into_measure(fallback.as_ref())?;
            let nu = read_json::<MeasureJson>(&nu)?.into_measure(fallback.as_ref())?;
            let sol = solve_gauss_image(&mu, &nu)?;
            let mut json = SolutionJson::new(&sol, &pushforward_report(&sol));
            let mut ok = true;
            if let Some(trials) = certify {
                let r = certify_optimality(&sol, trials, seed)?;
                let mut c = CertificationJson::new(&r, trials, seed);
                c.ok = r.min_gap >= -tol.competitor;
                ok = c.ok;
                json.certification = Some(c);
            }
            emit_json(out.as_deref(), &json)?;
            Ok(if ok { 0 } else { 1 })
        }

        Command::Eval { k, queries, out } => {
            let k = PseudoCone::try_from(read_json::<PseudoConeJson>(&k)?)?;
            let qs = read_json::<QueriesJson>(&queries)?.unit_vectors()?;
            let mut csv = String::from("kind,query,value\n");
            for (q, x) in qs.iter().enumerate() {
                let mut hit = false;
                if k.cone().in_interior(x) {
                    csv.push_str(&format!("radial,{q},{:.16e}\n", k.radial(x)?));
                    hit = true;
                }
                if k.cone().in_dual_interior(x) {
                    csv.push_str(&format!("support,{q},{:.16e}\n", k.support_abs(x)?));
                    let value = match k.reverse_gauss(x)? {
                        GaussImage::Unique(v) => coords(&v),
                        GaussImage::Ambiguous(_) => "ambiguous".to_string(),
                    };
                    csv.push_str(&format!("alpha_star,{q},{value}\n"));
                    hit = true;
                }
                if !hit {
                    return Err(Error::Domain(format!("query {q} lies in neither Ω_C nor Ω_C°")).into());
                }
            }
            emit(out.as_deref(), &csv)?;
            Ok(0)
        }

        Command::Cost { cone, u, v } => {
            let cone = read_cone(&cone)?;
            let c = cost(&cone, &unit(u)?, &unit(v)?)?;
            println!("{c:?}");
            Ok(0)
        }

        Command::Sample {
            cone,
            region,
            count,
            out,
        } => {
            let cone = read_cone(&cone)?;
            let kind = match region {
                Region::OmegaC => RegionKind::OmegaC,
                Region::OmegaCDual => RegionKind::OmegaCDual,
            };
            let region = SphericalRegion::new(kind, cone)?;
            let points = region.sample(count, seed);
            let m = DiscreteMeasure::uniform(region, points)?;
            emit_json(out.as_deref(), &MeasureJson::from(&m))?;
            Ok(0)
        }

        Command::CompareCosts { sol, map, out } => {
            let sol = read_json::<SolutionJson>(&sol)?.into_solution()?;
            let map = read_json::<MapJson>(&map)?;
            let c = compare_map(&sol, &map.map)?;
            emit_json(out.as_deref(), &MapComparisonJson::from(&c))?;
            Ok(if c.valid && c.gap >= -tol.map { 0 } else { 1 })
        }

        Command::Section {
            k,
            point,
            e1,
            e2,
            resolution,
            out,
        } => {
            let k = PseudoCone::try_from(read_json::<PseudoConeJson>(&k)?)?;
            let plane = match (point, e1, e2) {
                (None, None, None) if k.dim() == 2 => SectionPlane::ambient2(),
                (Some(p), Some(a), Some(b)) => SectionPlane::new(p, a, b)?,
                _ => {
                    return Err(CliError::Usage(
                        "give --point, --e1 and --e2 together (they may be omitted only for n = 2)".into(),
                    ))
                }
            };
            let sec = export_section(&k, &plane, resolution)?;
            emit(out.as_deref(), &sec.to_csv())?;
            Ok(0)
        }
    }
}
