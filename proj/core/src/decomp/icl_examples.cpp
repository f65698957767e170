#include "tsreason/decomp/prompt.hpp"

namespace tsreason::decomp {

// The instruction block and the anomaly example are reproduced exactly as
// shipped, typos included, because replay fixtures hash the rendered prompt.

const std::string& instruction_block() {
    static const std::string text =
        "Given the question and the toolbox definition provided above, please give steps of "
        "operations from the oprations availble listed above that can answer the question. "
        "Return only toolbox operations and enclose your response in ```python``` markdown. Do "
        "not include any other information in your response.For *PreOP modules, you can recieve "
        "intermediate evaluation feedback to help you choose the best model. You should revert "
        "to a previously best performing model if all other models you tried fail to improve the "
        "performance (a lower MAPE value indicates better performance). You will be able to "
        "regenrate your response upon recieving feedback. Your goal is to achieve a status of 1 "
        "in the evaluation result when possible. For example, if model A gives lower MAPE value "
        "compared to model B, you should choose model A.You should replace {PLACEHOLDER} with "
        "the corresponding arguments you deem appropriate for the operation functions. DO NOT "
        "use any other irrelevant operations or custom python code, follow my examples where "
        "solutions should be in such format.";
    return text;
}

const std::string& question_suffix() {
    static const std::string text =
        "Follow previous examples and answer my last question in the same format as previous "
        "examples within markdown format in ```python```.";
    return text;
}

const std::vector<std::pair<std::string, std::string>>& icl_examples() {
    static const std::vector<std::pair<std::string, std::string>> examples = {
        {
            "I have 2m_temperature data that spans 219 hours.  Please tell me whether there are "
            "anomalies (extreme weather events) and where are anomalies if present in this "
            "sequence. Please return a 1D numpy array with 1 indicating an anomaly and 0 "
            "indicating no anomaly. The data is stored in variable VAL and some anomaly-free "
            "normal samples are stored in variable NORM_VAL.",

            "NORM_SCORE = AnomalDetOP(data=NORM_VAL)\n"
            "THRES = calibrateThreshOP(data=NORM_SCORE)\n"
            "TEST_SCORE = AnomalDetOP(data=VAL)\n"
            "FINAL_RESULT = convertBinaryOP(data=TEST_SCORE, threshold=THRES)",
        },
        {
            "I have historical load data for the past 240 minutes. I need to ensure that the "
            "maximum allowable system load does not exceed 703.2500 MW. Please give me a "
            "forecast for the next 60 minutes for load. Your goal is to make the most accurate "
            "forecast as possible, refine prediction result based on the constraint previously "
            "described. Please return a 1D numpy array. The historical data is stored in "
            "variable VAL.",

            "FC = UniPreOP(data=VAL, future_length=60, model=\"holt_winters\", period=60)\n"
            "FINAL_RESULT = projectConstraintOP(data=FC, kind=\"max_load\", value=703.25)",
        },
        {
            "I have historical temperature,humidity,pressure,wind_speed data and want to get "
            "the causal relationship between each pair of the variables. I know that 41.67% of "
            "the variable pairs have relationship. Consider the potential influence of each "
            "variable on the others in this variable list: temperature,humidity,pressure,"
            "wind_speed. Please return a 2D numpy array of 0s and 1s. The data is stored in "
            "variable VAL.",

            "PVALS = CausalMatrixOP(data=VAL, max_lag=5)\n"
            "FINAL_RESULT = selectTopRatioOP(pvals=PVALS, ratio=0.4167)",
        },
    };
    return examples;
}

}  // namespace tsreason::decomp
