from spectra_count import CountConfig, PreconditionerSpec, gen_laplace_2d, slice_spectrum


if __name__ == "__main__":
    A = gen_laplace_2d(5)
    cfg = CountConfig.new(k=12, m=20, preconditioner=PreconditionerSpec.new("ildl", 1e-4))

    result = slice_spectrum(A, 0.0, 2000.0, 4, cfg, probes=9)

    print("breakpoints:", ", ".join(f"{x:.1f}" for x in result.breakpoints))
    print("counts:", result.counts)
