package fixtures;

class A {
    void a() {}
    class B {
        void b() {}
        class C {
            void c() {}
        }
    }
    class D {
        void d() {}
    }
}
