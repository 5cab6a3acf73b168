#include <diffnet/pipeline.hpp>

namespace diffnet {

LambdaChoice choose_lambdas(const StandardizedDataset<double>& data, const LearnConfig& config)
{
    LambdaChoice choice;
    choice.penalty.alpha = config.alpha;
    if (config.lambda2) {
        choice.penalty.lambda2 = *config.lambda2;
    } else {
        choice.heuristic = select_lambda2(data, config.alpha);
        choice.penalty.lambda2 = choice.heuristic->chosen;
    }
    if (config.lambda1) {
        choice.penalty.lambda1 = *config.lambda1;
    } else {
        CvOptions cv;
        cv.folds = config.folds;
        cv.seed = config.seed;
        cv.one_standard_error = config.one_standard_error;
        choice.cv = select_lambda1_cv(data, lambda1_grid(data, config.grid_length), cv, config.solver);
        choice.penalty.lambda1 = choice.cv->chosen;
    }
    choice.penalty.validate();
    return choice;
}

LearnResult learn_network(const StandardizedDataset<double>& data, const LearnConfig& config)
{
    LearnResult result;
    result.lambdas = choose_lambdas(data, config);
    result.fit = fit_all(data, result.lambdas.penalty, config.solver);
    result.model = assemble(result.fit.nodes, data.variable_names(), true);
    result.subnetwork = differential(result.model, config.differential);
    return result;
}

} // namespace diffnet
