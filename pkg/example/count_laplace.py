from spectra_count import CountConfig, PreconditionerSpec, estimate_count, exact_count, gen_laplace_2d
from spectra_count.laplace import laplace_shift_at_fraction


S = 5
A = gen_laplace_2d(S)
TAU = laplace_shift_at_fraction(S, 0.1)

SETUPS = [
    ("lanczos", PreconditionerSpec.new("none"), 60),
    ("lanczos", PreconditionerSpec.new("absdiag"), 60),
    ("lanczos", PreconditionerSpec.new("ildl", 1e-3), 10),
    ("lanczos-ga", PreconditionerSpec.new("ildl", 1e-3), 10),
    ("arnoldi", PreconditionerSpec.new("ildl", 1e-3), 10),
    ("chebyshev", PreconditionerSpec.new("none"), 200),
]


if __name__ == "__main__":
    print(f"n = {A.n}, tau = {TAU:.3f}, exact = {exact_count(A, TAU)}")

    for method, spec, k in SETUPS:
        cfg = CountConfig.new(tau=TAU, k=k, m=30, method=method, preconditioner=spec)
        report = estimate_count(A, cfg)
        print(f"{method:>10} {spec.kind:>8} k={k:<4} {report.estimate:>5} +- {report.std_error:.2f}")
