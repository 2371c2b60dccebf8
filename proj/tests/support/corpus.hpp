#pragma once

#include <array>
#include <string_view>

namespace molbench::testdata {

// Drug-like molecules written in the supported SMILES subset.
inline constexpr std::array<std::string_view, 100> kCorpus = {
    "CC(=O)Oc1ccccc1C(=O)O",                      // aspirin
    "CN1C=NC2=C1C(=O)N(C(=O)N2C)C",               // caffeine
    "CC(C)Cc1ccc(cc1)C(C)C(=O)O",                 // ibuprofen
    "CC(=O)Nc1ccc(O)cc1",                         // paracetamol
    "COc1ccc2cc(ccc2c1)C(C)C(=O)O",               // naproxen
    "OC(=O)Cc1ccccc1Nc1c(Cl)cccc1Cl",             // diclofenac
    "CN(C)CCCN1c2ccccc2CCc2ccccc21",              // imipramine
    "CNCCC(Oc1ccc(cc1)C(F)(F)F)c1ccccc1",         // fluoxetine
    "Clc1ccc2c(c1)C(=NCC(=O)N2C)c1ccccc1",        // diazepam
    "CC(C)NCC(O)COc1cccc2ccccc12",                // propranolol
    "CN1CCC[C@H]1c1cccnc1",                       // nicotine
    "O=C(O)c1ccccc1O",                            // salicylic acid
    "c1ccc2ccccc2c1",                             // naphthalene
    "c1ccc2cc3ccccc3cc2c1",                       // anthracene
    "c1ccncc1",                                   // pyridine
    "c1cc[nH]c1",                                 // pyrrole
    "c1ccoc1",                                    // furan
    "c1ccsc1",                                    // thiophene
    "c1cnc[nH]1",                                 // imidazole
    "c1ccc2[nH]ccc2c1",                           // indole
    "C1CCCCC1",                                   // cyclohexane
    "C1CCOC1",                                    // THF
    "C1CCNCC1",                                   // piperidine
    "C1COCCN1",                                   // morpholine
    "C1CN(CCN1)c1ccccc1",                         // phenylpiperazine
    "CCO",                                        // ethanol
    "CC(C)O",                                     // isopropanol
    "CCCCCCCC",                                   // octane
    "CC(=O)C",                                    // acetone
    "C=CC=C",                                     // butadiene
    "C#CC",                                       // propyne
    "CC#N",                                       // acetonitrile
    "OCC(O)CO",                                   // glycerol
    "NCC(=O)O",                                   // glycine
    "CC(N)C(=O)O",                                // alanine
    "N[C@@H](Cc1ccccc1)C(=O)O",                   // phenylalanine
    "N[C@@H](Cc1c[nH]c2ccccc12)C(=O)O",           // tryptophan
    "OC1C(O)C(O)C(CO)OC1O",                       // glucose (pyranose)
    "CS(=O)(=O)C",                                // dimethyl sulfone
    "CP(=O)(O)O",                                 // methylphosphonic acid
    "OP(=O)(O)OCC",                               // ethyl phosphate
    "[Na+].[Cl-]",                                // salt
    "CC(=O)[O-].[Na+]",                           // sodium acetate
    "C[N+](C)(C)C",                               // tetramethylammonium
    "O=[N+]([O-])c1ccccc1",                       // nitrobenzene
    "FC(F)(F)c1ccccc1",                           // benzotrifluoride
    "Brc1ccccc1I",                                // bromoiodobenzene
    "ClCCl",                                      // dichloromethane
    "OB(O)c1ccccc1",                              // phenylboronic acid
    "C1CC1",                                      // cyclopropane
    "C1CC1C",                                     // methylcyclopropane
    "C1CCC2CCCCC2C1",                             // decalin
    "C1CC2CCC1C2",                                // norbornane
    "C12C3C4C1C5C2C3C45",                         // cubane
    "c1ccc(cc1)Cc1ccccc1",                        // diphenylmethane
    "c1ccc(cc1)-c1ccccc1",                        // biphenyl
    "O=C1CCCCC1",                                 // cyclohexanone
    "CC1=CC(=O)C=CC1=O",                          // methylbenzoquinone
    "O=C1NC(=O)c2ccccc12",                        // phthalimide
    "Cc1ccc(cc1)S(=O)(=O)N",                      // toluenesulfonamide
    "CC(C)(C)OC(=O)N",                            // tert-butyl carbamate
    "COC(=O)c1ccccc1",                            // methyl benzoate
    "CCN(CC)CC",                                  // triethylamine
    "CCOC(=O)C=C",                                // ethyl acrylate
    "OC(=O)C=CC(=O)O",                            // maleic/fumaric acid
    "C/C=C/C",                                    // trans-2-butene
    "CC(C)C[C@H](N)C(=O)O",                       // leucine
    "CSCCC(N)C(=O)O",                             // methionine
    "NC(=O)c1cccnc1",                             // nicotinamide
    "Cc1ncc(CO)c(CO)c1O",                         // pyridoxine
    "Nc1ncnc2[nH]cnc12",                          // adenine
    "O=c1cc[nH]c(=O)[nH]1",                       // uracil
    "Cc1c[nH]c(=O)[nH]c1=O",                      // thymine
    "CC(=O)NC1=CC=CC=C1",                         // acetanilide (Kekule)
    "C1=CC=C(C=C1)O",                             // phenol (Kekule)
    "OC(=O)c1ccc(N)cc1",                          // PABA
    "CCCCC(CC)COC(=O)c1ccccc1C(=O)OCC(CC)CCCC",   // DEHP
    "CC1(C)SC2C(NC(=O)Cc3ccccc3)C(=O)N2C1C(=O)O", // penicillin G
    "CN1CCN(CC1)C(c1ccccc1)c1ccc(Cl)cc1",         // chlorcyclizine
    "COc1cc2c(cc1OC)C(=O)C(CC1CCN(Cc3ccccc3)CC1)C2", // donepezil
    "CCOC(=O)C1=C(C)NC(C)=C(C1c1ccccc1[N+](=O)[O-])C(=O)OC", // nitrendipine-like
    "Cn1cnc2c1c(=O)[nH]c(=O)n2C",                 // theophylline-like
    "OCC1OC(O)C(O)C1O",                           // ribose (furanose)
    "C1CCC(CC1)NC1CCCCC1",                        // dicyclohexylamine
    "c1ccc2c(c1)oc1ccccc12",                      // dibenzofuran
    "c1ccc2c(c1)sc1ccccc12",                      // dibenzothiophene
    "c1ccc2c(c1)[nH]c1ccccc12",                   // carbazole
    "c1cnc2ncncc2c1",                             // pyridopyrimidine
    "C1CC2(CCC1)CCCC2",                           // spiro[4.5]decane
    "CC12CCC3C(CCC4CC(O)CCC34C)C1CCC2O",          // androstanediol skeleton
    "O=C(O)CCC(=O)O",                             // succinic acid
    "CCCCCCCCCCCCCCCC(=O)O",                      // palmitic acid
    "OCCN(CCO)CCO",                               // triethanolamine
    "C[Si](C)(C)C",                               // tetramethylsilane
    "[2H]C([2H])([2H])O",                         // deuterated methanol
    "C1=CCC=C1",                                  // cyclopentadiene
    "C1=CC=CC=CC=C1",                             // cyclooctatetraene
    "c1ccc(cc1)C1CCCCC1",                         // cyclohexylbenzene
    "c1ccc(cc1)C(=O)c1ccccc1",                    // benzophenone
    "CC(C)(C)c1ccc(O)cc1",                        // 4-tert-butylphenol
};

}  // namespace molbench::testdata
