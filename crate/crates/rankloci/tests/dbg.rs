#[test]
fn dbg_stage_timing() {
    use rankloci::*;
    use rankloci::monomial::TermOrder;
    use rankloci::incidence::{build_incidence, eliminate_kernel_rows};
    use rankloci::lagrange::build_lagrange_reduced;
    let a = LinearMatrix::from_i64(
        3, 3,
        &[
            vec![vec![1,0,0], vec![0,1,0], vec![0,0,1]],
            vec![vec![0,1,0], vec![1,0,0], vec![0,0,0]],
            vec![vec![0,0,1], vec![0,0,0], vec![1,0,0]],
            vec![vec![0,0,0], vec![0,0,1], vec![0,1,0]],
        ],
    );
    let mut s = Sampler::from_seed(1);
    let u = s.full_rank_matrix(1, 3, 99);
    let ss = s.rational_matrix(1, 1, 99);
    let m = s.invertible_matrix(3, 99);
    let am = a.change_of_variables(&m).unwrap();
    let inc = build_incidence(&am, 2, &u, &ss).unwrap();
    let t0 = std::time::Instant::now();
    let red = eliminate_kernel_rows(&inc).unwrap();
    let ideal = Ideal::new(&red.vars, red.polys.clone());
    let e = ideal.is_empty().unwrap();
    eprintln!("incidence emptiness: {e} in {:?}", t0.elapsed());
    let v = s.vector(3, 99);
    let lag = build_lagrange_reduced(&inc, &v).unwrap();
    eprintln!("lagrange: {} polys {} vars", lag.polys.len(), lag.vars.len());
    let t0 = std::time::Instant::now();
    let lideal = Ideal::new(&lag.vars, lag.polys.clone());
    let gb = lideal.groebner_basis(TermOrder::Grevlex).unwrap();
    eprintln!("grevlex GB: {} elements in {:?}", gb.len(), t0.elapsed());
    let t0 = std::time::Instant::now();
    let gb2 = lideal.groebner_basis(TermOrder::Elim { keep: 3 }).unwrap();
    eprintln!("elim GB: {} elements in {:?}", gb2.len(), t0.elapsed());
}
