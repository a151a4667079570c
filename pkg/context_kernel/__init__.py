# context_kernel package
