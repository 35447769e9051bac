#pragma once

#include <cstdint>
#include <vector>

namespace psg::analysis {

using Vectors = std::vector<std::vector<double>>;

struct KMeansResult {
    std::vector<int> assignments;
    Vectors centroids;
    double inertia = 0.0;
    double silhouette = 0.0;
    double davies_bouldin = 0.0;
};

struct KMeansOptions {
    int restarts = 10;
    int max_iterations = 300;
    std::uint64_t seed = 0;
};

// k-means++ seeding and Lloyd iterations, best inertia over restarts.
// Throws DegenerateInput for k < 2 or fewer than k distinct vectors.
KMeansResult kmeans_with_scores(const Vectors& vectors, int k, const KMeansOptions& options = {});

// Mean silhouette with Euclidean distance; points in singleton clusters
// contribute 0.
double silhouette_score(const Vectors& vectors, const std::vector<int>& assignments);

// Davies-Bouldin index over the clusters present in `assignments`, using
// cluster means as centroids.
double davies_bouldin_index(const Vectors& vectors, const std::vector<int>& assignments);

double euclidean(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace psg::analysis
