def loads(molstr):
    from pyscf.gto.mole import Mole
    mol = Mole()
    moldic = dict(molstr)
    for k, v in moldic.items():
        setattr(mol, k, v)
    mol.atom  = eval(mol.atom)
    mol.basis = eval(mol.basis)
    mol.ecp   = eval(mol.ecp)
    mol.nucmod = eval("{}")
    return mol
