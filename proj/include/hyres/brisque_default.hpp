#ifndef HYRES_BRISQUE_DEFAULT_HPP
#define HYRES_BRISQUE_DEFAULT_HPP

#include "hyres/iqa.hpp"

namespace hyres {

// Bundled linear scorer, fitted on a synthetic blur/noise degradation ladder
// of seeded phantoms. Regenerate with the `brisque_calibrate` tool; absolute
// scores are specific to this scorer, only ordering is meaningful.
inline const BrisqueModel& default_brisque_model() {
    static const BrisqueModel model = [] {
        BrisqueModel m;
        m.provenance = "synthetic degradation ladder, 192 samples";
        m.weights = {
            19.863000415019922,
            -230.25364733175104,
            8.8593338931329288,
            -98.596548976739498,
            -5.3527306599998674,
            97.8974258832191,
            8.8877855980832159,
            -75.947319917673866,
            -26.304929676259722,
            79.178036328678473,
            -39.170786709331757,
            3.2197224517676082,
            20.156451492065695,
            -31.884646835044283,
            -20.721267116051127,
            13.492500667963279,
            60.824714373966927,
            3.3232734966819728,
            16.129571606032176,
            87.576384420984766,
            -4.7614442833093564,
            78.179106701760787,
            44.7681370032412,
            -60.899820390305216,
            -10.159171295571536,
            58.832699018953569,
            43.509680421732135,
            -35.771952340514311,
            -2.5245022583710952,
            -10.017662520818131,
            -30.406951524457536,
            5.6270109354001487,
            0.52816104421076471,
            -27.584380293458842,
            -45.150682061464622,
            38.676410868766332
        };
        m.bias = 100.00791622881387;
        m.feature_min = {
            1.6059999999999339,
            0.074940059130510772,
            0.54200000000000037,
            -0.12006996139760139,
            3.2033735130446164e-05,
            0.016388385253098634,
            0.55100000000000038,
            -0.11048977850207252,
            3.4487475319979825e-05,
            0.016902448044818847,
            0.58200000000000041,
            -0.07595729709877963,
            0.00018705215104306905,
            0.014761980325766299,
            0.5740000000000004,
            -0.082321528403112423,
            0.0001789087925684677,
            0.014499860026008346,
            2.2189999999998666,
            0.19985658592981614,
            0.76200000000000057,
            -0.010438452793916702,
            0.0023973266109857303,
            0.08664202937564866,
            0.75400000000000056,
            -0.0064378258420438941,
            0.0020807064781313989,
            0.088840692193298265,
            0.81300000000000061,
            -0.0052319788123932065,
            0.006418660354042054,
            0.068939397291657906,
            0.77200000000000057,
            -0.010292715484376514,
            0.0070657953015592408,
            0.068436686874739014
        };
        m.feature_max = {
            3.0359999999997767,
            0.69564790643615881,
            1.006,
            0.15167866061184671,
            0.51616375033573092,
            0.3258782122429591,
            1.0129999999999992,
            0.1558476480705894,
            0.51813246488111031,
            0.33720436101237966,
            0.96700000000000075,
            0.1251856419170434,
            0.50220784628498882,
            0.38217729592737265,
            0.98600000000000076,
            0.1267925678611532,
            0.51132743047333873,
            0.38423727456753909,
            3.2589999999997521,
            0.52538717945747726,
            1.0159999999999989,
            0.23398529728939357,
            0.24480621063545971,
            0.2876467431122286,
            1.0639999999999936,
            0.23927736178871059,
            0.25279862020538019,
            0.2786273420820764,
            1.0759999999999923,
            0.14651702993714949,
            0.26442839409996594,
            0.27480415567641969,
            1.1129999999999882,
            0.14034232730934815,
            0.25063248643351138,
            0.26655746044099049
        };
        return m;
    }();
    return model;
}

} // namespace hyres

#endif
