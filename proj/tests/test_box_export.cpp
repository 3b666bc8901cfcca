#include <qto/box_export.hpp>
#include <qto/estimator.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace qto;

namespace {

Element boxed(std::string id, Point3 lo, Point3 hi) {
    Element e;
    e.id = std::move(id);
    e.aabb = Aabb(lo, hi);
    return e;
}

} // namespace

TEST(BboxToMesh, CanonicalCornerOrder) {
    const TriangleMesh m = bbox_to_mesh(Aabb({0, 0, 0}, {1, 2, 3}));
    ASSERT_EQ(m.vertices.size(), 8u);
    ASSERT_EQ(m.triangles.size(), 12u);
    EXPECT_EQ(m.vertices[0], (Point3{0, 0, 0}));
    EXPECT_EQ(m.vertices[1], (Point3{1, 0, 0}));
    EXPECT_EQ(m.vertices[2], (Point3{0, 2, 0}));
    EXPECT_EQ(m.vertices[4], (Point3{0, 0, 3}));
    EXPECT_EQ(m.vertices[7], (Point3{1, 2, 3}));
}

TEST(BboxToMesh, VolumesMatchBoxVolume) {
    EXPECT_NEAR(mesh_volume(bbox_to_mesh(Aabb({0, 0, 0}, {1, 1, 1}))), 1.0, 1e-15);
    EXPECT_NEAR(mesh_volume(bbox_to_mesh(Aabb({0, 0, 0}, {6, 0.3, 0.3}))), 0.54, 1e-12);
    EXPECT_EQ(mesh_volume(bbox_to_mesh(Aabb({0, 0, 0}, {1, 1, 0}))), 0.0);
}

TEST(BboxToMesh, OutwardOrientation) {
    // Signed volume (without the absolute value) is positive for outward winding.
    const TriangleMesh m = bbox_to_mesh(Aabb({-1, 2, 5}, {3, 4, 6}));
    double six_v = 0.0;
    for (const auto& t : m.triangles) {
        six_v += dot(m.vertices[t[0]], cross(m.vertices[t[1]], m.vertices[t[2]]));
    }
    EXPECT_NEAR(six_v / 6.0, 8.0, 1e-12);
    EXPECT_TRUE(is_watertight(m));
}

TEST(ExportBoxes, Counting) {
    const std::vector<Element> elems{boxed("A", {0, 0, 0}, {1, 1, 1}), boxed("B", {2, 2, 2}, {3, 4, 5})};
    const std::string obj = export_boxes(elems);
    std::size_t objects = 0, vertices = 0, faces = 0;
    detail::for_each_line(obj, [&](std::size_t, std::string_view l) {
        objects += l.starts_with("o ");
        vertices += l.starts_with("v ");
        faces += l.starts_with("f ");
    });
    EXPECT_EQ(objects, 2u);
    EXPECT_EQ(vertices, 16u);
    EXPECT_EQ(faces, 24u);
}

TEST(ExportBoxes, EmptyListIsHeaderOnly) {
    const std::string obj = export_boxes(std::vector<Element>{});
    EXPECT_EQ(obj.front(), '#');
    EXPECT_EQ(std::count(obj.begin(), obj.end(), '\n'), 1);
    EXPECT_TRUE(parse_obj_objects(obj).empty());
}

TEST(ExportBoxes, ReingestReproducesBoxes) {
    std::mt19937_64 rng(88);
    std::uniform_real_distribution<double> c(-100.0, 100.0);
    std::uniform_real_distribution<double> s(0.0, 15.0);
    std::vector<Element> elems;
    for (int i = 0; i < 40; ++i) {
        const Point3 lo{c(rng), c(rng), c(rng)};
        elems.push_back(boxed("E" + std::to_string(i), lo, {lo.x + s(rng), lo.y + s(rng), lo.z + s(rng)}));
    }
    const auto objects = parse_obj_objects(export_boxes(elems));
    ASSERT_EQ(objects.size(), elems.size());
    for (std::size_t i = 0; i < elems.size(); ++i) {
        EXPECT_EQ(objects[i].name, elems[i].id);
        EXPECT_TRUE(is_watertight(objects[i].mesh));
        const Aabb back = compute_aabb(objects[i].mesh);
        for (std::size_t a = 0; a < 3; ++a) {
            EXPECT_NEAR(back.min()[a], elems[i].aabb.min()[a], 1e-9 * std::max(1.0, std::abs(elems[i].aabb.min()[a])) * 1e3);
            EXPECT_NEAR(back.max()[a], elems[i].aabb.max()[a], 1e-9 * std::max(1.0, std::abs(elems[i].aabb.max()[a])) * 1e3);
        }
    }
}
