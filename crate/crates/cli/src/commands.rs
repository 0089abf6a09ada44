use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use jordan_lattice::fixtures::{self, all_matrices};
use jordan_lattice::formats::{self, BaseFile, ChainFile, LatticeFile, MatrixFile};
use jordan_lattice::gf::{block_partition_oracle, compute_jordan_chains, verify_chain_basis, GfError};
use jordan_lattice::jnb::{compute_jnb, nilpotency_from_jnb, verify_jnb, JnbError};
use jordan_lattice::lattice_map::ConditionReport;
use jordan_lattice::partition::{self, Display as Parts};
use jordan_lattice::subspace_lattice::ModelError;
use jordan_lattice::{FiniteLattice, GfMatrix, JoinHom, SubspaceLatticeModel, Verdict};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::{Command, CrosscheckArgs, GenArgs, GenKind};

/// Most matrices `crosscheck --exhaustive` will enumerate.
const EXHAUSTIVE_LIMIT: u64 = 1 << 22;

#[derive(Debug)]
pub enum Failure {
    /// Exit 1; carries the text printed so far.
    Math(String),
    /// Exit 2.
    Usage(String),
}

type Outcome = Result<String, Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

pub fn run(command: Command) -> Outcome {
    match command {
        Command::Check { file, emit_dot } => check(&file, emit_dot.as_deref()),
        Command::Solve {
            file,
            output,
            force,
            emit_dot,
        } => solve(&file, output.as_deref(), force, emit_dot.as_deref()),
        Command::Verify { lattice, base } => verify(&lattice, &base),
        Command::Chains { matrix, output } => chains(&matrix, output.as_deref()),
        Command::Oracle { matrix } => oracle(&matrix),
        Command::Crosscheck(args) => crosscheck(&args),
        Command::Gen(args) => gen(&args),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Writes `json` to `output` if given, otherwise appends it to `out`.
fn emit(output: Option<&Path>, json: &str, out: &mut String) -> Result<(), Failure> {
    match output {
        Some(path) => {
            write(path, json)?;
            let _ = writeln!(out, "wrote {}", path.display());
        }
        None => out.push_str(json),
    }
    Ok(())
}

fn load_lattice(path: &Path) -> Result<(Arc<FiniteLattice>, Option<JoinHom>), Failure> {
    let file: LatticeFile =
        formats::from_json(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    file.load().map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_matrix(path: &Path) -> Result<GfMatrix, Failure> {
    let file: MatrixFile =
        formats::from_json(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    file.to_matrix().map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn require_map(map: Option<JoinHom>, path: &Path) -> Result<JoinHom, Failure> {
    map.ok_or_else(|| usage(format!("{}: lattice file has no \"map\"", path.display())))
}

fn check(path: &Path, emit_dot: Option<&Path>) -> Outcome {
    let (lattice, map) = load_lattice(path)?;
    if let Some(dot) = emit_dot {
        write(dot, &lattice.to_dot())?;
    }
    let report = match &map {
        Some(h) => h.conditions(),
        None => ConditionReport::lattice_only(&lattice),
    };
    let mut out = report.render(&lattice).to_string();
    if let Some(h) = &map {
        match h.nilpotency_index() {
            Some(k) => {
                let _ = writeln!(out, "nilpotency index: {k}");
            }
            None => {
                let _ = writeln!(out, "not nilpotent, λ^∞(1) = {}", lattice.label(h.stable_image()));
            }
        }
    }
    if report.all_hold() {
        Ok(out)
    } else {
        Err(Failure::Math(out))
    }
}

fn solve(path: &Path, output: Option<&Path>, force: bool, emit_dot: Option<&Path>) -> Outcome {
    let (lattice, map) = load_lattice(path)?;
    let h = require_map(map, path)?;
    if let Some(dot) = emit_dot {
        write(dot, &lattice.to_dot())?;
    }
    let base = match compute_jnb(&h, !force) {
        Ok(base) => base,
        Err(e @ (JnbError::NotNilpotent { .. } | JnbError::ConditionsFailed(_))) => {
            return Err(Failure::Math(format!("{}\n", e.to_string().trim_end())))
        }
        Err(e) => return Err(Failure::Math(format!("no base: {e}\n"))),
    };
    let mut out = String::new();
    for (t, chain) in base.labelled(&lattice).iter().enumerate() {
        let _ = writeln!(out, "chain {}: {}", t + 1, chain.join(" ← "));
    }
    let lengths: Vec<String> = base.lengths().iter().map(usize::to_string).collect();
    let _ = writeln!(out, "k = ({})", lengths.join(","));
    match nilpotency_from_jnb(&base) {
        Ok(k) => {
            let _ = writeln!(out, "nilpotency index: {k}");
        }
        Err(_) => out.push_str("empty base\n"),
    }
    emit(output, &formats::to_json(&BaseFile::from_base(&lattice, &base)), &mut out)?;
    Ok(out)
}

fn verify(lattice_path: &Path, base_path: &Path) -> Outcome {
    let (lattice, map) = load_lattice(lattice_path)?;
    let h = require_map(map, lattice_path)?;
    let file: BaseFile = formats::from_json(&read(base_path)?)
        .map_err(|e| usage(format!("{}: {e}", base_path.display())))?;
    let base = file
        .to_base(&lattice)
        .map_err(|e| usage(format!("{}: {e}", base_path.display())))?;
    match verify_jnb(&h, &base) {
        Verdict::Holds => Ok("valid Jordan normal base\n".into()),
        Verdict::Fails(why) => Err(Failure::Math(format!("invalid: {why}\n"))),
    }
}

fn gf_failure(e: GfError) -> Failure {
    match e {
        GfError::NotNilpotent => Failure::Math("matrix is not nilpotent\n".into()),
        other => usage(other),
    }
}

fn chains(path: &Path, output: Option<&Path>) -> Outcome {
    let a = load_matrix(path)?;
    let basis = compute_jordan_chains(&a).map_err(gf_failure)?;
    let mut out = String::new();
    let _ = writeln!(out, "partition {}", Parts(&basis.lengths()));
    let verdict = verify_chain_basis(&a, &basis);
    match &verdict {
        Verdict::Holds => out.push_str("verification: ok\n"),
        Verdict::Fails(why) => {
            let _ = writeln!(out, "verification: FAILED ({why})");
        }
    }
    emit(output, &formats::to_json(&ChainFile::from_basis(&basis)), &mut out)?;
    if verdict.holds() {
        Ok(out)
    } else {
        Err(Failure::Math(out))
    }
}

fn oracle(path: &Path) -> Outcome {
    let a = load_matrix(path)?;
    let parts = block_partition_oracle(&a).map_err(gf_failure)?;
    Ok(format!("partition {}\n", Parts(&parts)))
}

fn model_failure(e: ModelError) -> Failure {
    match e {
        ModelError::Gf(GfError::NotNilpotent) => Failure::Math("matrix is not nilpotent\n".into()),
        other => usage(other),
    }
}

fn crosscheck(args: &CrosscheckArgs) -> Outcome {
    let (p, n) = (args.prime, args.dim);
    let model = SubspaceLatticeModel::enumerate(p, n).map_err(model_failure)?;
    let mut matrices: Vec<GfMatrix> = if let Some(path) = &args.matrix {
        vec![load_matrix(path)?]
    } else if args.exhaustive {
        all_matrices(p, n, EXHAUSTIVE_LIMIT)
            .ok_or_else(|| usage(format!("more than {EXHAUSTIVE_LIMIT} matrices of size {n} over GF({p})")))?
            .filter(GfMatrix::is_nilpotent)
            .collect()
    } else if let Some(count) = args.random {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        (0..count)
            .map(|_| {
                let parts = fixtures::random_partition(n, &mut rng);
                fixtures::random_nilpotent_with_partition(p, &parts, &mut rng)
            })
            .collect()
    } else {
        return Err(usage("choose one of --matrix, --exhaustive or --random"));
    };
    matrices.sort_by_key(|a| a.to_rows());

    let reports = matrices
        .par_iter()
        .map(|a| model.cross_validate(a))
        .collect::<Result<Vec<_>, _>>()
        .map_err(model_failure)?;

    let mut out = String::new();
    let _ = writeln!(
        out,
        "Sub(GF({p})^{n}): {} elements, height {}, {} atoms",
        model.len(),
        model.lattice().height(),
        model.lattice().atoms().len()
    );
    let mut failed = 0;
    for r in &reports {
        let status = if r.passed() { "ok" } else { "FAILED" };
        let _ = writeln!(out, "{} partition {} {status}", r.matrix.encode(), Parts(&r.partition));
        if !r.passed() {
            failed += 1;
            out.push_str(&r.to_string());
        }
    }
    let summary = if failed == 0 {
        format!("all {} nilpotent matrices passed\n", reports.len())
    } else {
        format!("{failed} of {} nilpotent matrices FAILED\n", reports.len())
    };
    let text = match &args.output {
        Some(path) => {
            write(path, &out)?;
            format!("wrote {}\n{summary}", path.display())
        }
        None => out + &summary,
    };
    if failed == 0 {
        Ok(text)
    } else {
        Err(Failure::Math(text))
    }
}

fn need<T>(value: Option<T>, flag: &str) -> Result<T, Failure> {
    value.ok_or_else(|| usage(format!("--{flag} is required for this kind")))
}

fn gen(args: &GenArgs) -> Outcome {
    let mut lattice_for_dot = None;
    let json = match args.kind {
        GenKind::Boolean => {
            let l = Arc::new(fixtures::boolean_lattice(need(args.dim, "dim")?).map_err(usage)?);
            let map = args.zero_map.then(|| JoinHom::zero(l.clone()));
            let file = LatticeFile::from_lattice(&l, map.as_ref());
            lattice_for_dot = Some(l);
            formats::to_json(&file)
        }
        GenKind::Chain => {
            let l = Arc::new(fixtures::chain_lattice(need(args.len, "len")?).map_err(usage)?);
            let map = args.shift.then(|| fixtures::chain_shift(l.clone()));
            let file = LatticeFile::from_lattice(&l, map.as_ref());
            lattice_for_dot = Some(l);
            formats::to_json(&file)
        }
        GenKind::SubspaceLattice => {
            let model = SubspaceLatticeModel::enumerate(need(args.prime, "prime")?, need(args.dim, "dim")?)
                .map_err(usage)?;
            let a = args.matrix.as_deref().map(load_matrix).transpose()?;
            let file = LatticeFile::from_model(&model, a.as_ref()).map_err(usage)?;
            lattice_for_dot = Some(model.lattice_arc().clone());
            formats::to_json(&file)
        }
        GenKind::NilpotentMatrix => {
            let p = need(args.prime, "prime")?;
            GfMatrix::new(p, 0, 0, Vec::new()).map_err(usage)?;
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let a = match &args.partition {
                Some(text) => {
                    let parts = partition::parse(text).map_err(usage)?;
                    fixtures::random_nilpotent_with_partition(p, &parts, &mut rng)
                }
                None => fixtures::random_nilpotent(p, need(args.dim, "dim")?, &mut rng),
            };
            formats::to_json(&MatrixFile::from_matrix(&a))
        }
        GenKind::CanonicalBlocks => {
            let p = need(args.prime, "prime")?;
            GfMatrix::new(p, 0, 0, Vec::new()).map_err(usage)?;
            let parts = partition::parse(&need(args.partition.clone(), "partition")?).map_err(usage)?;
            formats::to_json(&MatrixFile::from_matrix(&fixtures::canonical_blocks(p, &parts)))
        }
    };
    if let Some(dot) = &args.emit_dot {
        let l = lattice_for_dot.ok_or_else(|| usage("--emit-dot applies to lattice kinds only"))?;
        write(dot, &l.to_dot())?;
    }
    let mut out = String::new();
    emit(args.output.as_deref(), &json, &mut out)?;
    Ok(out)
}
