from src.offdiag.block import DyadicBlock
from src.offdiag.poisson import desk_kernels, poisson_report, s_direct, s_poisson_detail
from src.suites.suite import Suite, int_list
from src.types import KernelShape, Sign
from src.utils import make_rng

POISSON_TOL = 1e-5
CONTROL_ORDERS = 1e4
DESK_BLOCKS = [(m, n, c) for m in (8, 16) for n in (8, 16) for c in (2, 4, 8)]


class PoissonSuite(Suite):
    """s_direct = s_poisson on seeded desk blocks, both signs and kernels, with a phase-dropping control"""
    name = 'poisson-verify'
    parameters = (
        ('blocks', int, 6, 'number of seeded desk blocks'),
        ('block', int_list, None, 'one block M,N,C instead of the seeded choice'),
        ('kernels', str, 'both', 'gaussian | both'),
    )

    def getName(self):
        return 'Poisson duality'

    def blocks(self):
        if self.params['block']:
            return [DyadicBlock(*self.params['block'])]
        rng = make_rng(self.config.seed)
        picks = rng.choice(len(DESK_BLOCKS), size=min(self.params['blocks'], len(DESK_BLOCKS)), replace=False)
        return [DyadicBlock(*DESK_BLOCKS[int(i)]) for i in sorted(picks)]

    def solve(self):
        threads = self.config.threads
        for block in self.blocks():
            kernels = desk_kernels(block)
            if self.params['kernels'] == 'gaussian':
                kernels = kernels[:1]
            label = 'M=%g N=%g C=%g' % (block.M, block.N, block.C)
            for kernel in kernels:
                for sign in (Sign.plus, Sign.minus):
                    row = poisson_report(block, sign, kernel, threads=threads)
                    key = '%s %s %s' % (label, kernel.shape.name, sign.name)
                    self.note('tail ' + key, row['tail_bound'])
                    self.check('|direct - dual| ' + key, row['difference'], POISSON_TOL)
            self.control(block, kernels[0], label)

    def control(self, block, kernel, label):
        """dropping e(±x1 x2²/4c) from the arithmetic part must break the identity by orders of magnitude"""
        direct = s_direct(block, Sign.plus, kernel, self.config.threads)
        true_dual = s_poisson_detail(block, Sign.plus, kernel, threads=self.config.threads)
        corrupted = s_poisson_detail(block, Sign.plus, kernel, threads=self.config.threads, with_phase=False)
        honest = max(abs(direct - true_dual.value), 1e-300)
        broken = abs(direct - corrupted.value)
        self.note('control %s %s' % (label, KernelShape(kernel.shape).name), broken)
        self.check('control breaks by 1e4 %s' % label, CONTROL_ORDERS * honest, broken)
