# context_kernel.utils package
